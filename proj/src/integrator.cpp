#include "anisoflow/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "anisoflow/model.hpp"
#include "anisoflow/spectral.hpp"

namespace anisoflow {

Scheme parse_scheme(const std::string& name) {
    if (name == "IFRK2" || name == "ifrk2") return Scheme::IFRK2;
    if (name == "IFRK4" || name == "ifrk4") return Scheme::IFRK4;
    throw std::invalid_argument("unknown scheme '" + name + "' (expected IFRK2 or IFRK4)");
}

const char* to_string(Scheme s) { return s == Scheme::IFRK2 ? "IFRK2" : "IFRK4"; }

void StepperConfig::validate() const {
    if (dt_mode == DtMode::fixed && !(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (dt_mode == DtMode::cfl && !(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
        throw std::invalid_argument("cfl safety must lie in (0, 1]");
    }
    if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
}

namespace {

/// Per-mode exp(-|k|^2 h).
std::vector<double> viscous_factor(const SpectralGrid& g, double h) {
    std::vector<double> f(g.spectral_size());
    for (std::size_t m = 0; m < f.size(); ++m) f[m] = std::exp(-g.k_squared(m) * h);
    return f;
}

void scale_velocity(VectorField& v, const std::vector<double>& factor) {
    for (auto& c : v) {
        for (std::size_t m = 0; m < factor.size(); ++m) c[m] *= factor[m];
    }
}

/// E(h) applied to a state: v picks up the factor, psi does not.
FlowState propagate(const FlowState& u, const std::vector<double>& factor) {
    FlowState out = u;
    scale_velocity(out.v, factor);
    return out;
}

Tendency propagate(const Tendency& k, const std::vector<double>& factor) {
    Tendency out = k;
    scale_velocity(out.dv, factor);
    return out;
}

void add_scaled(FlowState& u, double a, const Tendency& k) {
    u.psi.axpy(a, k.dpsi);
    for (int i = 0; i < 3; ++i) u.v[i].axpy(a, k.dv[i]);
}

Tendency evaluate(FlowState stage, const StepperConfig& config) {
    if (config.dealias_every_stage) {
        dealias_in_place(stage.psi);
        for (auto& c : stage.v) dealias_in_place(c);
    }
    return nonstiff_rhs(stage);
}

FlowState step_ifrk2(const FlowState& u, double h, const StepperConfig& config) {
    const auto e = viscous_factor(*u.grid(), h);
    const Tendency k1 = evaluate(u, config);
    FlowState ua = u;
    add_scaled(ua, h, k1);
    ua = propagate(ua, e);
    ua.t = u.t + h;
    const Tendency k2 = evaluate(ua, config);

    FlowState next = u;
    add_scaled(next, 0.5 * h, k1);
    next = propagate(next, e);
    add_scaled(next, 0.5 * h, k2);
    return next;
}

FlowState step_ifrk4(const FlowState& u, double h, const StepperConfig& config) {
    const auto e_half = viscous_factor(*u.grid(), 0.5 * h);
    const auto e_full = viscous_factor(*u.grid(), h);
    const FlowState u_half = propagate(u, e_half);

    const Tendency k1 = evaluate(u, config);
    FlowState ua = u;
    add_scaled(ua, 0.5 * h, k1);
    ua = propagate(ua, e_half);
    ua.t = u.t + 0.5 * h;
    const Tendency k2 = evaluate(ua, config);

    FlowState ub = u_half;
    add_scaled(ub, 0.5 * h, k2);
    ub.t = u.t + 0.5 * h;
    const Tendency k3 = evaluate(ub, config);

    FlowState uc = propagate(u, e_full);
    add_scaled(uc, h, propagate(k3, e_half));
    uc.t = u.t + h;
    const Tendency k4 = evaluate(uc, config);

    FlowState next = propagate(u, e_full);
    add_scaled(next, h / 6.0, propagate(k1, e_full));
    add_scaled(next, h / 3.0, propagate(k2, e_half));
    add_scaled(next, h / 3.0, propagate(k3, e_half));
    add_scaled(next, h / 6.0, k4);
    return next;
}

}  // namespace

FlowState step(const FlowState& state, double dt, const StepperConfig& config) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    FlowState next = config.scheme == Scheme::IFRK2 ? step_ifrk2(state, dt, config) : step_ifrk4(state, dt, config);
    next.t = state.t + dt;
    if (!all_finite(next)) throw BlowUpError(next.t, "non-finite coefficient");
    reenforce_invariants(next);
    return next;
}

double cfl_dt(const FlowState& state, double safety, double dt_max) {
    const auto& g = *state.grid();
    const RealField u1 = inverse_transform(state.v[0]);
    const RealField u2 = inverse_transform(state.v[1]);
    const RealField u3 = inverse_transform(state.v[2]);
    double vmax = 0.0;
    for (std::size_t p = 0; p < u1.size(); ++p) {
        vmax = std::max(vmax, std::sqrt(u1[p] * u1[p] + u2[p] * u2[p] + u3[p] * u3[p]));
    }
    const double dx = std::min({g.spacing(0), g.spacing(1), g.spacing(2)});
    return std::min(safety * dx / std::max(vmax, kCflVelocityFloor), dt_max);
}

namespace {

/// Stores samples and emits each one sample late, once its centered
/// residual can be filled in.
class LedgerPipeline {
public:
    explicit LedgerPipeline(const std::vector<RunObserver*>& observers) : observers_(observers) {}

    void push(const FlowState& state, EnergyLedger ledger) {
        for (auto* o : observers_) o->on_sample(state, ledger);
        series_.push_back(std::move(ledger));
        const std::size_t n = series_.size();
        if (n >= 3) {
            try {
                series_[n - 2].residual =
                    energy_identity_residual(std::span<const EnergyLedger>(series_).subspan(n - 3, 3));
            } catch (const std::invalid_argument&) {
                series_[n - 2].residual = kNaN;
            }
        }
        if (n >= 2) emit(n - 2);
    }

    void flush() {
        if (!series_.empty()) emit(series_.size() - 1);
    }

    std::vector<EnergyLedger>& series() { return series_; }

private:
    void emit(std::size_t i) {
        for (auto* o : observers_) o->on_ledger(series_[i]);
    }

    const std::vector<RunObserver*>& observers_;
    std::vector<EnergyLedger> series_;
};

}  // namespace

RunResult run(const FlowState& initial, const StepperConfig& config, const RunOptions& options,
              std::vector<RunObserver*> observers) {
    config.validate();
    if (options.sample_every == 0) throw std::invalid_argument("sample_every must be at least 1");

    RunResult result;
    LedgerPipeline pipeline(observers);

    FlowState state = initial;
    const double t0 = initial.t;
    const double duration = std::max(0.0, config.t_end - t0);
    const double energy0 = h2_energy(initial);
    const double b0 = b0_functional(initial);

    std::size_t fixed_steps = 0;
    double fixed_dt = 0.0;
    if (config.dt_mode == DtMode::fixed && duration > 0.0) {
        // Keep dt verbatim when it divides the interval, so a resumed run
        // takes bit-identical steps; otherwise shrink it to fit.
        const double ratio = duration / config.dt;
        const double nearest = std::round(ratio);
        if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * nearest) {
            fixed_steps = static_cast<std::size_t>(nearest);
            fixed_dt = config.dt;
        } else {
            fixed_steps = static_cast<std::size_t>(std::ceil(ratio));
            fixed_dt = duration / static_cast<double>(fixed_steps);
        }
    }

    pipeline.push(state, compute_ledger(state, options.detail));

    Termination termination = Termination::completed;
    double blow_up_time = kNaN;
    std::size_t n = 0;
    while (true) {
        double dt;
        if (config.dt_mode == DtMode::fixed) {
            if (n >= fixed_steps) break;
            dt = fixed_dt;
        } else {
            const double remaining = config.t_end - state.t;
            if (remaining <= 1e-12 * std::max(1.0, config.t_end)) break;
            dt = std::min(cfl_dt(state, config.cfl_safety, config.dt_max), remaining);
        }
        try {
            FlowState next = step(state, dt, config);
            if (config.dt_mode == DtMode::fixed) {
                next.t = n + 1 == fixed_steps ? config.t_end : t0 + static_cast<double>(n + 1) * fixed_dt;
            }
            state = std::move(next);
        } catch (const BlowUpError& e) {
            termination = Termination::blow_up_nonfinite;
            blow_up_time = e.time();
            break;
        }
        ++n;
        for (auto* o : observers) o->on_step(state, n);
        const double energy = h2_energy(state);
        if (!std::isfinite(energy) || (energy0 > 0.0 && energy > options.blow_up_factor * energy0)) {
            termination = Termination::blow_up_growth;
            blow_up_time = state.t;
            break;
        }
        const bool last = config.dt_mode == DtMode::fixed ? n == fixed_steps : false;
        if (n % options.sample_every == 0 || last) {
            pipeline.push(state, compute_ledger(state, options.detail));
        }
    }
    pipeline.flush();
    auto& all = pipeline.series();

    result.report = summarize(all, b0, energy0);
    result.report.termination = termination;
    result.report.blow_up_time = blow_up_time;
    result.report.steps = n;
    result.report.t_final = state.t;
    result.final_state = std::move(state);
    for (auto* o : observers) o->on_finish(result.report);
    if (options.keep_ledger) result.ledger = std::move(all);
    return result;
}

}  // namespace anisoflow
