#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "anisoflow/aligned.hpp"
#include "anisoflow/grid.hpp"

namespace anisoflow {

using Complex = std::complex<double>;

/// i * k * c without the inf/NaN bookkeeping of a general complex product.
inline Complex times_ik(double k, Complex c) { return {-k * c.imag(), k * c.real()}; }

/// Real samples of a scalar field on the physical grid.
class RealField {
public:
    RealField() = default;
    explicit RealField(GridPtr grid);
    RealField(GridPtr grid, std::vector<double> samples);

    /// Samples f(x) at the grid points x_j = i_j * L / n_j.
    static RealField sample(GridPtr grid, const std::function<double(double, double, double)>& f);

    const GridPtr& grid() const { return grid_; }
    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    std::size_t size() const { return data_.size(); }

private:
    GridPtr grid_;
    AlignedVector<double> data_;
};

/// Normalized Fourier coefficients of a real scalar field,
/// f(x) = sum_k c(k) exp(i k.x), stored on the half lattice.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    std::span<Complex> coeffs() { return data_; }
    std::span<const Complex> coeffs() const { return data_; }
    Complex& operator[](std::size_t m) { return data_[m]; }
    const Complex& operator[](std::size_t m) const { return data_[m]; }
    std::size_t size() const { return data_.size(); }

    /// Coefficient at integer wavenumber (k1, k2, k3), resolving the
    /// conjugate half when k3 < 0.
    Complex at(int k1, int k2, int k3) const;
    /// Sets c(k) and c(-k) = conj(c(k)) consistently.
    void set_mode(int k1, int k2, int k3, Complex value);

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double scale);
    /// this += a * x
    SpectralField& axpy(double a, const SpectralField& x);

    void set_zero();
    bool is_valid() const { return grid_ != nullptr; }

private:
    GridPtr grid_;
    AlignedVector<Complex> data_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Throws std::invalid_argument unless both fields live on grids of the same shape.
void require_same_grid(const SpectralField& a, const SpectralField& b);

}  // namespace anisoflow
