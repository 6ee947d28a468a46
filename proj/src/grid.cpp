#include "anisoflow/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace anisoflow {

namespace {

// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

double complete_homogeneous(int degree, double a, double b, double c) {
    double total = 0.0;
    for (int i = 0; i <= degree; ++i) {
        for (int j = 0; i + j <= degree; ++j) {
            const int l = degree - i - j;
            total += std::pow(a, i) * std::pow(b, j) * std::pow(c, l);
        }
    }
    return total;
}

}  // namespace

struct SpectralGrid::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    // Used when the caller's arrays lack SIMD alignment.
    fftw_plan r2c_unaligned = nullptr;
    fftw_plan c2r_unaligned = nullptr;
};

std::shared_ptr<const SpectralGrid> SpectralGrid::create(int n1, int n2, int n3, double box_length) {
    return std::shared_ptr<const SpectralGrid>(new SpectralGrid(n1, n2, n3, box_length));
}

SpectralGrid::SpectralGrid(int n1, int n2, int n3, double box_length)
    : dims_{n1, n2, n3}, box_length_(box_length) {
    for (int axis = 0; axis < 3; ++axis) {
        const int n = dims_[axis];
        if (n < 2 || n % 2 != 0) {
            throw std::invalid_argument("grid resolution must be a positive even integer, got " +
                                        std::to_string(n));
        }
    }
    if (!(box_length > 0.0) || !std::isfinite(box_length)) {
        throw std::invalid_argument("box length must be positive and finite");
    }
    dk_ = 2.0 * M_PI / box_length_;
    physical_size_ = static_cast<std::size_t>(n1) * n2 * n3;
    spectral_size_ = static_cast<std::size_t>(n1) * n2 * n3_half();

    for (auto& t : kint_) t.resize(spectral_size_);
    for (auto& t : kvec_) t.resize(spectral_size_);
    for (auto& t : kderiv_) t.resize(spectral_size_);
    for (auto& t : sobolev_) t.resize(spectral_size_);
    ksq_.resize(spectral_size_);
    khsq_.resize(spectral_size_);
    mask_.resize(spectral_size_);
    weight_.resize(spectral_size_);

    for (int i1 = 0; i1 < n1; ++i1) {
        for (int i2 = 0; i2 < n2; ++i2) {
            for (int i3 = 0; i3 < n3_half(); ++i3) {
                const std::size_t m = spectral_index(i1, i2, i3);
                const std::array<int, 3> idx{i1, i2, i3};
                for (int axis = 0; axis < 3; ++axis) {
                    const int k = integer_wavenumber(axis, idx[axis]);
                    kint_[axis][m] = k;
                    kvec_[axis][m] = dk_ * k;
                    kderiv_[axis][m] = (2 * idx[axis] == dims_[axis]) ? 0.0 : dk_ * k;
                }
                const double a = kvec_[0][m] * kvec_[0][m];
                const double b = kvec_[1][m] * kvec_[1][m];
                const double c = kvec_[2][m] * kvec_[2][m];
                ksq_[m] = a + b + c;
                khsq_[m] = a + b;
                mask_[m] = band_contains(kint_[0][m], kint_[1][m], kint_[2][m]) ? 1 : 0;
                weight_[m] = (i3 == 0 || 2 * i3 == n3) ? 1.0 : 2.0;
                double acc = 0.0;
                for (int s = 0; s < 4; ++s) {
                    acc += complete_homogeneous(s, a, b, c);
                    sobolev_[s][m] = acc;
                }
            }
        }
    }

    plans_ = std::make_unique<Plans>();
    {
        // ESTIMATE keeps plan selection, and therefore rounding, independent of timing.
        std::lock_guard lock(planner_mutex());
        double* real = fftw_alloc_real(physical_size_);
        fftw_complex* spec = fftw_alloc_complex(spectral_size_);
        plans_->r2c = fftw_plan_dft_r2c_3d(n1, n2, n3, real, spec, FFTW_ESTIMATE);
        plans_->c2r = fftw_plan_dft_c2r_3d(n1, n2, n3, spec, real, FFTW_ESTIMATE);
        plans_->r2c_unaligned = fftw_plan_dft_r2c_3d(n1, n2, n3, real, spec, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_->c2r_unaligned = fftw_plan_dft_c2r_3d(n1, n2, n3, spec, real, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(real);
        fftw_free(spec);
    }
    if (!plans_->r2c || !plans_->c2r || !plans_->r2c_unaligned || !plans_->c2r_unaligned) {
        throw std::runtime_error("FFTW planning failed");
    }
}

SpectralGrid::~SpectralGrid() {
    if (plans_) {
        std::lock_guard lock(planner_mutex());
        for (fftw_plan p : {plans_->r2c, plans_->c2r, plans_->r2c_unaligned, plans_->c2r_unaligned}) {
            if (p) fftw_destroy_plan(p);
        }
    }
}

std::size_t SpectralGrid::conjugate_partner(std::size_t m) const {
    const int i3 = static_cast<int>(m % n3_half());
    const std::size_t rest = m / n3_half();
    const int i2 = static_cast<int>(rest % dims_[1]);
    const int i1 = static_cast<int>(rest / dims_[1]);
    return spectral_index((dims_[0] - i1) % dims_[0], (dims_[1] - i2) % dims_[1], i3);
}

bool SpectralGrid::band_contains(int k1, int k2, int k3) const {
    return 3 * std::abs(k1) < dims_[0] && 3 * std::abs(k2) < dims_[1] && 3 * std::abs(k3) < dims_[2];
}

int SpectralGrid::dealias_limit() const {
    int limit = dims_[0];
    for (int n : dims_) limit = std::min(limit, (n - 1) / 3);
    return limit;
}

void SpectralGrid::execute_r2c(double* in, void* out) const {
    auto* o = static_cast<fftw_complex*>(out);
    const bool aligned = fftw_alignment_of(in) == 0 && fftw_alignment_of(reinterpret_cast<double*>(o)) == 0;
    fftw_execute_dft_r2c(aligned ? plans_->r2c : plans_->r2c_unaligned, in, o);
}

void SpectralGrid::execute_c2r(void* in, double* out) const {
    auto* i = static_cast<fftw_complex*>(in);
    const bool aligned = fftw_alignment_of(reinterpret_cast<double*>(i)) == 0 && fftw_alignment_of(out) == 0;
    fftw_execute_dft_c2r(aligned ? plans_->c2r : plans_->c2r_unaligned, i, out);
}

}  // namespace anisoflow
