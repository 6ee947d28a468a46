#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace anisoflow {

/// Discretization of the periodic box [0, L)^3 with n1 x n2 x n3 samples.
///
/// Physical samples are stored row-major with x3 fastest. Spectral
/// coefficients use the real-to-complex half lattice: indices
/// (i1, i2, i3) with 0 <= i3 <= n3/2, i3 fastest. Integer wavenumbers
/// follow the usual FFT ordering, k = i for i <= n/2 and k = i - n above.
///
/// A grid owns its FFT plans and per-mode tables and is immutable once
/// built; fields share it through std::shared_ptr<const SpectralGrid>.
class SpectralGrid {
public:
    static std::shared_ptr<const SpectralGrid> create(int n1, int n2, int n3,
                                                      double box_length = 6.283185307179586);
    static std::shared_ptr<const SpectralGrid> cube(int n, double box_length = 6.283185307179586) {
        return create(n, n, n, box_length);
    }

    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    int n(int axis) const { return dims_[axis]; }
    const std::array<int, 3>& dims() const { return dims_; }
    int n3_half() const { return dims_[2] / 2 + 1; }
    double box_length() const { return box_length_; }
    double volume() const { return box_length_ * box_length_ * box_length_; }
    double dk() const { return dk_; }  // 2*pi / L
    double spacing(int axis) const { return box_length_ / dims_[axis]; }

    std::size_t physical_size() const { return physical_size_; }
    std::size_t spectral_size() const { return spectral_size_; }

    std::size_t physical_index(int i1, int i2, int i3) const {
        return (static_cast<std::size_t>(i1) * dims_[1] + i2) * dims_[2] + i3;
    }
    std::size_t spectral_index(int i1, int i2, int i3) const {
        return (static_cast<std::size_t>(i1) * dims_[1] + i2) * n3_half() + i3;
    }

    int integer_wavenumber(int axis, int index) const {
        return index <= dims_[axis] / 2 ? index : index - dims_[axis];
    }

    /// Per-mode tables over the half lattice.
    int mode_k(int axis, std::size_t m) const { return kint_[axis][m]; }
    double wavenumber(int axis, std::size_t m) const { return kvec_[axis][m]; }
    /// Multiplier of an odd derivative along `axis`; zero on the Nyquist index.
    double derivative_wavenumber(int axis, std::size_t m) const { return kderiv_[axis][m]; }
    double k_squared(std::size_t m) const { return ksq_[m]; }
    double kh_squared(std::size_t m) const { return khsq_[m]; }
    bool in_dealias_band(std::size_t m) const { return mask_[m] != 0; }
    /// 1 for self-conjugate planes (i3 == 0 or i3 == n3/2), 2 elsewhere.
    double hermitian_weight(std::size_t m) const { return weight_[m]; }
    /// Sum over |alpha| <= s of prod_j k_j^(2 alpha_j), s in [0, 3].
    double sobolev_multiplier(int s, std::size_t m) const { return sobolev_[s][m]; }

    /// Half-lattice index of the conjugate partner of a mode on a
    /// self-conjugate plane.
    std::size_t conjugate_partner(std::size_t m) const;

    /// True iff every axis satisfies 3|k_j| < n_j.
    bool band_contains(int k1, int k2, int k3) const;
    /// Largest integer |k_j| kept by the dealias mask on every axis.
    int dealias_limit() const;

    bool same_shape(const SpectralGrid& other) const {
        return dims_ == other.dims_ && box_length_ == other.box_length_;
    }

    // Raw FFTW execution; arrays may be unaligned. `in` of c2r is clobbered.
    void execute_r2c(double* in, void* out) const;
    void execute_c2r(void* in, double* out) const;

private:
    SpectralGrid(int n1, int n2, int n3, double box_length);

    std::array<int, 3> dims_;
    double box_length_;
    double dk_;
    std::size_t physical_size_;
    std::size_t spectral_size_;

    std::array<std::vector<int>, 3> kint_;
    std::array<std::vector<double>, 3> kvec_;
    std::array<std::vector<double>, 3> kderiv_;
    std::vector<double> ksq_;
    std::vector<double> khsq_;
    std::vector<unsigned char> mask_;
    std::vector<double> weight_;
    std::array<std::vector<double>, 4> sobolev_;

    struct Plans;
    std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

}  // namespace anisoflow
