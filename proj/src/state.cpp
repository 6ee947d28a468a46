#include "anisoflow/state.hpp"

#include <algorithm>
#include <cmath>

#include "anisoflow/model.hpp"
#include "anisoflow/spectral.hpp"

namespace anisoflow {

VectorField zero_vector(const GridPtr& grid) {
    return {SpectralField(grid), SpectralField(grid), SpectralField(grid)};
}

FlowState FlowState::zero(const GridPtr& grid, double t) {
    return FlowState{SpectralField(grid), zero_vector(grid), t};
}

Tendency Tendency::zero(const GridPtr& grid) { return Tendency{SpectralField(grid), zero_vector(grid)}; }

namespace {

Complex modal_divergence(const VectorField& v, std::size_t m) {
    const auto& g = *v[0].grid();
    Complex div{};
    for (int j = 0; j < 3; ++j) div += g.derivative_wavenumber(j, m) * v[j][m];
    return div;
}

}  // namespace

double max_divergence_defect(const VectorField& v) {
    const auto& g = *v[0].grid();
    double peak = 0.0, worst = 0.0;
    for (std::size_t m = 0; m < v[0].size(); ++m) {
        peak = std::max(peak, std::sqrt(std::norm(v[0][m]) + std::norm(v[1][m]) + std::norm(v[2][m])));
        const double k = std::sqrt(g.k_squared(m));
        if (k > 0.0) worst = std::max(worst, std::abs(modal_divergence(v, m)) / k);
    }
    return peak > 0.0 ? worst / peak : 0.0;
}

double max_divergence(const VectorField& v) {
    double worst = 0.0;
    for (std::size_t m = 0; m < v[0].size(); ++m) worst = std::max(worst, std::abs(modal_divergence(v, m)));
    return worst;
}

double max_hermitian_defect(const FlowState& s) {
    double worst = hermitian_defect(s.psi);
    for (const auto& c : s.v) worst = std::max(worst, hermitian_defect(c));
    return worst;
}

double max_mean_mode(const FlowState& s) {
    double worst = std::abs(s.psi[0]);
    for (const auto& c : s.v) worst = std::max(worst, std::abs(c[0]));
    return worst;
}

bool all_finite(const FlowState& s) {
    auto finite = [](const SpectralField& f) {
        return std::all_of(f.coeffs().begin(), f.coeffs().end(), [](const Complex& c) {
            return std::isfinite(c.real()) && std::isfinite(c.imag());
        });
    };
    return finite(s.psi) && finite(s.v[0]) && finite(s.v[1]) && finite(s.v[2]);
}

void reenforce_invariants(FlowState& s) {
    auto clean = [](SpectralField& f) {
        dealias_in_place(f);
        f[0] = Complex{};
        enforce_hermitian(f);
    };
    clean(s.psi);
    for (auto& c : s.v) clean(c);
    leray_project_in_place(s.v);
}

}  // namespace anisoflow
