// Acceptance battery: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Usage: anisoflow_acceptance [criterion numbers...]   (default: all)

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "anisoflow/diagnostics.hpp"
#include "anisoflow/harness.hpp"
#include "anisoflow/integrator.hpp"
#include "anisoflow/model.hpp"
#include "anisoflow/spectral.hpp"
#include "anisoflow/verify.hpp"

using namespace anisoflow;

namespace {

constexpr double kTwoPi = 6.283185307179586;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

/// Every sampled state of every run in this binary feeds the structure check.
StructureReport g_structure;
std::size_t g_structure_states = 0;

class StructureObserver : public RunObserver {
public:
    void on_sample(const FlowState& state, const EnergyLedger&) override {
        g_structure.absorb(state);
        ++g_structure_states;
    }
};

RunResult observed_run(const FlowState& init, const StepperConfig& config, const RunOptions& options,
                       std::vector<RunObserver*> extra = {}) {
    StructureObserver structure;
    extra.push_back(&structure);
    return run(init, config, options, extra);
}

StepperConfig fixed(Scheme scheme, double dt, double t_end) {
    StepperConfig c;
    c.scheme = scheme;
    c.dt = dt;
    c.t_end = t_end;
    return c;
}

InitSpec small_data(std::uint64_t seed, double b0) {
    InitSpec s;
    s.seed = seed;
    s.amplitude_B0 = b0;
    return s;
}

double relative_spread(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// 1. Exact identity suite.
Outcome exact_identities() {
    double worst = 0.0;
    int count = 0;
    for (int n : {16, 32}) {
        const auto g = SpectralGrid::cube(n);
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const FlowState s = random_band_state(g, 1000 + seed, 0.05 + 0.01 * static_cast<double>(seed % 10));
            const SubidentityResiduals r = energy_subidentities(s);
            worst = std::max({worst, r.h2_balance, r.cross_balance, r.energy_identity});
            ++count;
        }
    }
    return {worst <= 1e-10, fmt("max residual %.3e over %d states at 16^3 and 32^3 (tol 1e-10)", worst, count)};
}

// 2. Route equivalence.
Outcome route_equivalence() {
    const auto g = SpectralGrid::cube(16);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const FlowState s = random_band_state(g, 2000 + seed, 0.3);
        worst = std::max(worst, tendency_distance(compute_rhs(s), compute_rhs_explicit(s)));
    }
    return {worst <= 1e-11, fmt("max relative distance %.3e over 50 states at 16^3 (tol 1e-11)", worst)};
}

// 3. Linear oracle.
Outcome linear_oracle() {
    const auto g = SpectralGrid::cube(16);
    const Complex psi0{0.5, 0.1}, w0{0.0, 0.2};
    const double omega = std::sqrt(3.0) / 2.0;

    class Tracker : public RunObserver {
    public:
        std::function<void(const FlowState&)> check;
        void on_step(const FlowState& s, std::size_t) override { check(s); }
    };

    FlowState a = FlowState::zero(g);
    a.psi.set_mode(1, 0, 0, psi0);
    a.v[2].set_mode(1, 0, 0, w0);
    double err_h = 0.0;
    Tracker horizontal;
    horizontal.check = [&](const FlowState& s) {
        const double t = s.t, c = std::cos(omega * t), sn = std::sin(omega * t) / omega, d = std::exp(-0.5 * t);
        const Complex p = d * (c * psi0 + sn * (0.5 * psi0 - w0));
        const Complex w = d * (c * w0 + sn * (psi0 - 0.5 * w0));
        err_h = std::max({err_h, std::abs(s.psi.at(1, 0, 0) - p), std::abs(s.v[2].at(1, 0, 0) - w)});
    };
    RunOptions opts{LedgerDetail::energy, 1000};
    observed_run(a, fixed(Scheme::IFRK4, 1e-3, 10.0), opts, {&horizontal});

    FlowState b = FlowState::zero(g);
    b.psi.set_mode(0, 0, 1, Complex{0.5, 0.0});
    b.v[0].set_mode(0, 0, 1, Complex{0.3, 0.0});
    b.v[1].set_mode(0, 0, 1, Complex{0.0, 0.2});
    double err_v = 0.0;
    Tracker vertical;
    vertical.check = [&](const FlowState& s) {
        const double decay = std::exp(-s.t);
        err_v = std::max({err_v, std::abs(s.psi.at(0, 0, 1) - Complex{0.5, 0.0}),
                          std::abs(s.v[0].at(0, 0, 1) - decay * Complex{0.3, 0.0}),
                          std::abs(s.v[1].at(0, 0, 1) - decay * Complex{0.0, 0.2}), std::abs(s.v[2].at(0, 0, 1))});
    };
    observed_run(b, fixed(Scheme::IFRK4, 1e-3, 10.0), opts, {&vertical});

    return {err_h <= 1e-6 && err_v <= 1e-8,
            fmt("k=(1,0,0) max error %.3e (tol 1e-6); k=(0,0,1) max error %.3e (tol 1e-8)", err_h, err_v)};
}

// 4. Scheme order.
Outcome scheme_order() {
    const auto g = SpectralGrid::cube(32);
    const FlowState init = generate_initial(g, small_data(7, 0.05));

    // Both runs sample every step, so the stencil spacing is dt; residuals
    // are compared at the common times t = j * 1e-3.
    const double t_end = 0.1;
    const RunResult coarse = observed_run(init, fixed(Scheme::IFRK2, 1e-3, t_end), {LedgerDetail::full, 1});
    const RunResult fine = observed_run(init, fixed(Scheme::IFRK2, 5e-4, t_end), {LedgerDetail::full, 1});
    double r_coarse = 0.0, r_fine = 0.0;
    for (std::size_t i = 1; i + 1 < coarse.ledger.size(); ++i) {
        r_coarse = std::max(r_coarse, coarse.ledger[i].residual);
        r_fine = std::max(r_fine, fine.ledger[2 * i].residual);
    }
    const double factor = r_coarse / r_fine;

    auto distance = [](const FlowState& a, const FlowState& b) {
        double d = 0.0;
        for (std::size_t m = 0; m < a.grid()->spectral_size(); ++m) {
            d = std::max(d, std::abs(a.psi[m] - b.psi[m]));
            for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a.v[i][m] - b.v[i][m]));
        }
        return d;
    };
    const RunOptions sparse{LedgerDetail::energy, 40};
    const double dt = 0.025;
    const FlowState ref = observed_run(init, fixed(Scheme::IFRK2, dt / 16.0, 1.0), sparse).final_state;
    const double e1 = distance(observed_run(init, fixed(Scheme::IFRK2, dt, 1.0), sparse).final_state, ref);
    const double e2 = distance(observed_run(init, fixed(Scheme::IFRK2, dt / 2.0, 1.0), sparse).final_state, ref);
    const double order = std::log2(e1 / e2);

    return {factor >= 3.5 && factor <= 4.5 && order >= 1.9,
            fmt("IFRK2 residual %.3e -> %.3e, factor %.3f (want [3.5, 4.5]); self-convergence order %.3f (want >= 1.9)",
                r_coarse, r_fine, factor, order)};
}

// 6. Small-data boundedness. Also feeds the anisotropy line.
struct BoundednessData {
    double tail_fraction_max = 0.0;
    bool ran = false;
};
BoundednessData g_boundedness;

Outcome small_data_boundedness() {
    const auto g = SpectralGrid::cube(32);
    const double dt = 0.02;

    // Locate the bounded regime: a short-window sweep with bisection.
    SweepSpec sweep;
    sweep.amplitudes = {0.05, 0.5, 5.0, 50.0};
    sweep.base_init = small_data(1, 0.05);
    sweep.base_config = fixed(Scheme::IFRK4, dt, 5.0);
    sweep.options = {LedgerDetail::energy, 25};
    sweep.bisect = true;
    sweep.bisect_width = 0.1;
    const SweepResult swept = amplitude_sweep(g, sweep);
    std::string where;
    double b0 = 0.05;
    if (swept.bracket) {
        b0 = std::min(0.05, 0.5 * (*swept.bracket)[0]);
        where = fmt("bounded/blow-up bracket [%.4g, %.4g] after %d bisections", (*swept.bracket)[0],
                    (*swept.bracket)[1], swept.bisections);
    } else if (!swept.rows.front().bounded) {
        return {false, "sweep found no bounded amplitude"};
    } else {
        where = "no blow-up up to 50";
    }

    double worst_energy = 0.0, worst_bt = 0.0;
    int agree = 0, bounded = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const FlowState init = generate_initial(g, small_data(seed, b0));
        const RunOptions opts{LedgerDetail::energy, 10};
        const RunReport a = observed_run(init, fixed(Scheme::IFRK4, dt, 50.0), opts).report;
        const RunReport b = observed_run(init, fixed(Scheme::IFRK4, dt / 2.0, 50.0), opts).report;
        if (a.bounded() == b.bounded()) ++agree;
        if (a.bounded() && b.bounded()) ++bounded;
        for (const RunReport* r : {&a, &b}) {
            worst_energy = std::max(worst_energy, r->sup_energy_ratio);
            worst_bt = std::max(worst_bt, r->B_T / r->B0);
            g_boundedness.tail_fraction_max =
                std::max(g_boundedness.tail_fraction_max, r->horizontal_dissipation_tail_fraction);
        }
    }
    g_boundedness.ran = true;
    const bool pass = bounded == 10 && agree == 10 && worst_energy <= 4.0 && std::isfinite(worst_bt) && worst_bt <= 10.0;
    return {pass, fmt("%s; B0 = %.4g: %d/10 seeds bounded at dt and dt/2, %d/10 verdicts agree, "
                      "max sup E/E0 = %.4f (tol 4), max B_T/B0 = %.4f (tol 10)",
                      where.c_str(), b0, bounded, agree, worst_energy, worst_bt)};
}

// 7 and 8 share one ensemble per resolution.
struct EnsembleStats {
    std::array<double, 3> interp{};
    std::array<double, 3> probe{};
    double pressure = 0.0;
    bool finite = true;
};

EnsembleStats ensemble(int n) {
    const auto g = SpectralGrid::cube(n);
    EnsembleStats out;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const FlowState init = generate_initial(g, small_data(100 + seed, 0.05));
        const RunReport r = observed_run(init, fixed(Scheme::IFRK4, 0.01, 2.0), {LedgerDetail::full, 5}).report;
        for (int i = 0; i < 3; ++i) {
            out.finite = out.finite && std::isfinite(r.interpolation.ratios[i]) && std::isfinite(r.probe.ratios[i]);
            out.interp[i] = std::max(out.interp[i], r.interpolation.ratios[i]);
            out.probe[i] = std::max(out.probe[i], r.probe.ratios[i]);
        }
        out.finite = out.finite && std::isfinite(r.pressure_ratio) && r.bounded();
        out.pressure = std::max(out.pressure, r.pressure_ratio);
    }
    return out;
}

std::map<int, EnsembleStats> g_ensembles;

const EnsembleStats& ensemble_at(int n) {
    auto it = g_ensembles.find(n);
    if (it == g_ensembles.end()) it = g_ensembles.emplace(n, ensemble(n)).first;
    return it->second;
}

Outcome inequality_witnesses() {
    const EnsembleStats& c = ensemble_at(16);
    const EnsembleStats& f = ensemble_at(32);
    double spread = 0.0;
    std::string values;
    for (int i = 0; i < 3; ++i) {
        spread = std::max({spread, relative_spread(c.interp[i], f.interp[i]), relative_spread(c.probe[i], f.probe[i])});
    }
    for (int i = 0; i < 3; ++i) values += fmt(" interp%d %.4g/%.4g", i + 1, c.interp[i], f.interp[i]);
    for (int i = 0; i < 3; ++i) values += fmt(" probe%d %.4g/%.4g", i + 1, c.probe[i], f.probe[i]);
    return {c.finite && f.finite && spread <= 0.2,
            fmt("max ratios 16^3/32^3:%s; max spread %.3f (tol 0.2)", values.c_str(), spread)};
}

Outcome pressure_witness() {
    const auto g = SpectralGrid::cube(32);
    FlowState s = FlowState::zero(g);
    s.psi = forward_transform(RealField::sample(g, [](double, double, double z) { return std::sin(z); }));
    const RealField p = inverse_transform(pressure_solve(s));
    double analytic = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double z = kTwoPi * static_cast<double>(i % 32) / 32.0;
        analytic = std::max(analytic, std::abs(p[i] - (-2.0 * std::cos(z) - 0.5 * std::cos(2.0 * z))));
    }
    const EnsembleStats& c = ensemble_at(16);
    const EnsembleStats& f = ensemble_at(32);
    const double spread = relative_spread(c.pressure, f.pressure);
    return {analytic <= 1e-12 && c.finite && f.finite && spread <= 0.2,
            fmt("analytic psi = sin(x3) max error %.3e (tol 1e-12); sup |grad p|_H1 / B0 = %.4f (16^3) / %.4f (32^3), "
                "spread %.3f (tol 0.2)",
                analytic, c.pressure, f.pressure, spread)};
}

// 5. Structure over every sampled state seen so far, plus a dedicated run.
Outcome structure() {
    const auto g = SpectralGrid::cube(32);
    observed_run(generate_initial(g, small_data(5, 0.5)), fixed(Scheme::IFRK4, 0.01, 1.0), {LedgerDetail::energy, 1});
    const StructureReport& r = g_structure;
    return {r.ok(), fmt("%zu sampled states: divergence %.3e (tol 1e-12), mean %.3e (must be 0), "
                        "Hermitian %.3e (tol 1e-13), D_v3 excess %.3e (tol 1e-12)",
                        g_structure_states, r.divergence, r.mean, r.hermitian, r.dv3_excess)};
}

Outcome anisotropy() {
    if (!g_boundedness.ran) small_data_boundedness();
    const double f = g_boundedness.tail_fraction_max;
    return {f <= 0.01, fmt("horizontal dissipation integral gains at most %.3e of its total over the final "
                           "quarter (tol 0.01)", f)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisoflow acceptance battery"};
    std::vector<std::string> selected;
    app.add_option("criteria", selected, "Criteria to run (1-8, anisotropy); default all");
    CLI11_PARSE(app, argc, argv);

    struct Entry {
        std::string key, title;
        std::function<Outcome()> fn;
    };
    // Structure runs after the others so it sees their sampled states.
    const std::vector<Entry> entries{
        {"1", "exact identity suite", exact_identities},
        {"2", "route equivalence", route_equivalence},
        {"3", "linear oracle", linear_oracle},
        {"4", "scheme order", scheme_order},
        {"6", "small-data boundedness", small_data_boundedness},
        {"7", "inequality witnesses", inequality_witnesses},
        {"8", "pressure bound witness", pressure_witness},
        {"anisotropy", "horizontal dissipation saturation", anisotropy},
        {"5", "conservation and structure", structure},
    };
    const std::set<std::string> want(selected.begin(), selected.end());
    for (const auto& key : want) {
        if (std::none_of(entries.begin(), entries.end(), [&](const Entry& e) { return e.key == key; })) {
            std::fprintf(stderr, "unknown criterion '%s'\n", key.c_str());
            return 2;
        }
    }

    int failures = 0;
    for (const auto& e : entries) {
        if (!want.empty() && !want.count(e.key)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = e.fn();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("%s criterion %s (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", e.key.c_str(), e.title.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
