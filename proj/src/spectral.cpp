#include "anisoflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anisoflow/summation.hpp"

namespace anisoflow {

SpectralField forward_transform(const RealField& physical) {
    return forward_transform(physical.grid(), physical.values());
}

SpectralField forward_transform(const GridPtr& grid, std::span<const double> samples) {
    if (!grid) throw std::invalid_argument("forward_transform: null grid");
    if (samples.size() != grid->physical_size()) {
        throw std::invalid_argument("forward_transform: sample count does not match grid resolution");
    }
    SpectralField out(grid);
    // r2c plans preserve their input.
    grid->execute_r2c(const_cast<double*>(samples.data()), out.coeffs().data());
    const double norm = 1.0 / static_cast<double>(grid->physical_size());
    for (auto& c : out.coeffs()) c *= norm;
    return out;
}

RealField inverse_transform(const SpectralField& field) {
    const auto& grid = field.grid();
    AlignedVector<Complex> scratch(field.coeffs().begin(), field.coeffs().end());
    RealField out(grid);
    grid->execute_c2r(scratch.data(), out.values().data());
    return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
    if (axis < 1 || axis > 3) throw std::invalid_argument("derivative: axis must be 1, 2 or 3");
    const auto& g = *f.grid();
    SpectralField out(f.grid());
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m] = times_ik(g.derivative_wavenumber(axis - 1, m), f[m]);
    }
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    const auto& g = *f.grid();
    SpectralField out(f.grid());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = -g.k_squared(m) * f[m];
    return out;
}

SpectralField horizontal_laplacian(const SpectralField& f) {
    const auto& g = *f.grid();
    SpectralField out(f.grid());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = -g.kh_squared(m) * f[m];
    return out;
}

SpectralField inverse_neg_laplacian(const SpectralField& f) {
    const auto& g = *f.grid();
    SpectralField out(f.grid());
    for (std::size_t m = 0; m < out.size(); ++m) {
        const double k2 = g.k_squared(m);
        out[m] = k2 > 0.0 ? f[m] / k2 : Complex{};
    }
    return out;
}

void dealias_in_place(SpectralField& f) {
    const auto& g = *f.grid();
    for (std::size_t m = 0; m < f.size(); ++m) {
        if (!g.in_dealias_band(m)) f[m] = Complex{};
    }
}

SpectralField dealias(SpectralField f) {
    dealias_in_place(f);
    return f;
}

void enforce_hermitian(SpectralField& f) {
    const auto& g = *f.grid();
    for (std::size_t m = 0; m < f.size(); ++m) {
        if (g.hermitian_weight(m) != 1.0) continue;
        const std::size_t p = g.conjugate_partner(m);
        if (p == m) {
            f[m] = Complex(f[m].real(), 0.0);
        } else if (p > m) {
            const Complex avg = 0.5 * (f[m] + std::conj(f[p]));
            f[m] = avg;
            f[p] = std::conj(avg);
        }
    }
}

double hermitian_defect(const SpectralField& f) {
    const auto& g = *f.grid();
    double worst = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) {
        if (g.hermitian_weight(m) != 1.0) continue;
        const std::size_t p = g.conjugate_partner(m);
        worst = std::max(worst, std::abs(f[m] - std::conj(f[p])));
    }
    return worst;
}

double sobolev_inner(const SpectralField& a, const SpectralField& b, int s) {
    require_same_grid(a, b);
    if (s < 0 || s > 3) throw std::invalid_argument("sobolev_inner: s must be in [0, 3]");
    const auto& g = *a.grid();
    CompensatedSum sum;
    for (std::size_t m = 0; m < a.size(); ++m) {
        const double re = a[m].real() * b[m].real() + a[m].imag() * b[m].imag();
        sum.add(g.hermitian_weight(m) * g.sobolev_multiplier(s, m) * re);
    }
    return g.volume() * sum.value();
}

double sobolev_norm_sq(const SpectralField& a, int s) { return sobolev_inner(a, a, s); }

namespace {

bool supported_exponent(double p) { return p == 2.0 || p == 4.0 || std::isinf(p); }

}  // namespace

double mixed_norm(const RealField& f, double q_h, double r_v) {
    if (!supported_exponent(q_h) || !supported_exponent(r_v)) {
        throw std::invalid_argument("mixed_norm: exponents must be 2, 4 or infinity");
    }
    const auto& g = *f.grid();
    const double dz = g.spacing(2);
    const double dA = g.spacing(0) * g.spacing(1);
    CompensatedSum outer;
    double outer_max = 0.0;
    for (int i1 = 0; i1 < g.n(0); ++i1) {
        for (int i2 = 0; i2 < g.n(1); ++i2) {
            double column;
            if (std::isinf(r_v)) {
                column = 0.0;
                for (int i3 = 0; i3 < g.n(2); ++i3) {
                    column = std::max(column, std::abs(f[g.physical_index(i1, i2, i3)]));
                }
            } else {
                CompensatedSum inner;
                for (int i3 = 0; i3 < g.n(2); ++i3) {
                    inner.add(std::pow(std::abs(f[g.physical_index(i1, i2, i3)]), r_v));
                }
                column = std::pow(inner.value() * dz, 1.0 / r_v);
            }
            if (std::isinf(q_h)) {
                outer_max = std::max(outer_max, column);
            } else {
                outer.add(std::pow(column, q_h));
            }
        }
    }
    if (std::isinf(q_h)) return outer_max;
    return std::pow(outer.value() * dA, 1.0 / q_h);
}

double mixed_norm(const SpectralField& f, double q_h, double r_v) {
    return mixed_norm(inverse_transform(f), q_h, r_v);
}

}  // namespace anisoflow
