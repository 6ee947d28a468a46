#include "anisoflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "anisoflow/checkpoint.hpp"
#include "anisoflow/diagnostics.hpp"
#include "anisoflow/harness.hpp"
#include "anisoflow/integrator.hpp"
#include "anisoflow/model.hpp"
#include "anisoflow/spectral.hpp"

namespace anisoflow {

FlowState random_band_state(const GridPtr& grid, std::uint64_t seed, double amplitude) {
    InitSpec spec;
    spec.k_max = grid->dealias_limit();
    spec.seed = seed;
    spec.amplitude_B0 = amplitude;
    spec.spectrum_slope = 0.0;
    return generate_initial(grid, spec);
}

void StructureReport::absorb(const FlowState& s) {
    divergence = std::max(divergence, max_divergence_defect(s.v));
    mean = std::max(mean, max_mean_mode(s));
    hermitian = std::max(hermitian, max_hermitian_defect(s));
    const EnergyLedger l = compute_ledger(s, LedgerDetail::energy);
    dv3_excess = std::max(dv3_excess, std::max(0.0, l.D_v3 - l.D_visc) / std::max(l.D_visc, 1e-300));
}

namespace {

double max_abs_diff(const RealField& a, const RealField& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double max_abs(const RealField& a) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i]));
    return d;
}

CheckResult check(std::string name, double value, double tol) {
    return {std::move(name), value, tol, value <= tol};
}

}  // namespace

std::vector<CheckResult> verify_suite(const GridPtr& grid, std::uint64_t seed, int states,
                                      const std::string& scratch_dir) {
    std::vector<CheckResult> out;
    const double amplitude = 0.1;

    double roundtrip = 0.0, parseval = 0.0, identity = 0.0, routes = 0.0, rhs_div = 0.0, projection = 0.0;
    for (int i = 0; i < states; ++i) {
        const FlowState s = random_band_state(grid, seed + static_cast<std::uint64_t>(i), amplitude);
        const RealField x = inverse_transform(s.psi);
        roundtrip = std::max(roundtrip, max_abs_diff(inverse_transform(forward_transform(x)), x) / max_abs(x));

        double physical = 0.0;
        for (std::size_t p = 0; p < x.size(); ++p) physical += x[p] * x[p];
        physical *= grid->volume() / static_cast<double>(grid->physical_size());
        const double spectral = sobolev_norm_sq(s.psi, 0);
        parseval = std::max(parseval, std::abs(physical - spectral) / spectral);

        const SubidentityResiduals r = energy_subidentities(s);
        identity = std::max({identity, r.h2_balance, r.cross_balance, r.energy_identity});

        const Tendency a = compute_rhs(s);
        const Tendency b = compute_rhs_explicit(s);
        routes = std::max(routes, tendency_distance(a, b));
        rhs_div = std::max({rhs_div, max_divergence_defect(a.dv), max_divergence_defect(b.dv)});

        const VectorField once = leray_project(s.v);
        for (int j = 0; j < 3; ++j) {
            for (std::size_t m = 0; m < once[j].size(); ++m) {
                projection = std::max(projection, std::abs(once[j][m] - s.v[j][m]));
            }
        }
    }
    out.push_back(check("transform round trip", roundtrip, 1e-12));
    out.push_back(check("Parseval", parseval, 1e-12));
    out.push_back(check("exact energy identity (tendency substitution)", identity, 1e-10));
    out.push_back(check("projected and explicit routes agree", routes, 1e-11));
    out.push_back(check("tendency divergence", rhs_div, 1e-12));
    out.push_back(check("projection fixed point", projection, 1e-14));

    {
        FlowState s = FlowState::zero(grid);
        s.psi.set_mode(0, 0, 1, Complex{0.0, -0.5});  // sin(x3)
        const SpectralField p = pressure_solve(s);
        const RealField got = inverse_transform(p);
        const RealField want = RealField::sample(grid, [](double, double, double z) {
            return -2.0 * std::cos(z) - 0.5 * std::cos(2.0 * z);
        });
        out.push_back(check("analytic pressure", max_abs_diff(got, want), 1e-12));
    }

    {
        StructureReport structure;
        StepperConfig config;
        config.dt = 1e-3;
        config.t_end = 20 * config.dt;
        FlowState s = random_band_state(grid, seed, amplitude);
        structure.absorb(s);
        for (int n = 0; n < 20; ++n) {
            s = step(s, config.dt, config);
            structure.absorb(s);
        }
        out.push_back(check("divergence along run", structure.divergence, 1e-12));
        out.push_back(check("mean modes along run", structure.mean, 0.0));
        out.push_back(check("Hermitian symmetry along run", structure.hermitian, 1e-13));
        out.push_back(check("D_v3 <= D_visc along run", structure.dv3_excess, 1e-12));

        std::filesystem::create_directories(scratch_dir);
        const auto path = (std::filesystem::path(scratch_dir) / "verify_roundtrip.aflw").string();
        write_checkpoint(path, s, config.scheme);
        const FlowState back = read_checkpoint(path).state;
        double mismatch = back.t == s.t ? 0.0 : 1.0;
        auto compare = [&](const SpectralField& x, const SpectralField& y) {
            for (std::size_t m = 0; m < x.size(); ++m) {
                if (x[m] != y[m]) mismatch = 1.0;
            }
        };
        compare(back.psi, s.psi);
        for (int j = 0; j < 3; ++j) compare(back.v[j], s.v[j]);
        std::filesystem::remove(path);
        out.push_back(check("checkpoint round trip is bit-exact", mismatch, 0.0));
    }
    return out;
}

}  // namespace anisoflow
