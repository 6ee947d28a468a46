#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisoflow/diagnostics.hpp"
#include "anisoflow/state.hpp"

namespace anisoflow {

/// Integrating-factor Runge-Kutta schemes. The tag doubles as the
/// checkpoint scheme byte.
enum class Scheme : std::uint8_t { IFRK2 = 2, IFRK4 = 4 };

Scheme parse_scheme(const std::string& name);
const char* to_string(Scheme s);

enum class DtMode { fixed, cfl };

struct StepperConfig {
    Scheme scheme = Scheme::IFRK4;
    DtMode dt_mode = DtMode::fixed;
    double dt = 1e-3;          // fixed mode step
    double cfl_safety = 0.5;   // cfl mode safety factor
    double dt_max = 1e-2;      // cap on the cfl step
    double t_end = 1.0;
    bool dealias_every_stage = true;

    /// Throws std::invalid_argument on dt <= 0, safety outside (0, 1] or t_end < 0.
    void validate() const;
};

/// Raised by step() when a coefficient becomes NaN or infinite.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, const std::string& what) : std::runtime_error(what), time_(t) {}
    double time() const { return time_; }

private:
    double time_;
};

/// Advances the state by dt. The viscous term is integrated exactly as
/// exp(-|k|^2 dt) per mode; transport and coupling terms explicitly.
FlowState step(const FlowState& state, double dt, const StepperConfig& config);

inline constexpr double kCflVelocityFloor = 1e-3;

/// safety * dx_min / max(||v||_inf, 1e-3), capped at dt_max.
double cfl_dt(const FlowState& state, double safety, double dt_max = 1e-2);

/// Receives run output. All callbacks are optional.
class RunObserver {
public:
    virtual ~RunObserver() = default;
    /// After every accepted step, with its 1-based index.
    virtual void on_step(const FlowState& /*state*/, std::size_t /*step*/) {}
    /// At every sample, before its residual is known.
    virtual void on_sample(const FlowState& /*state*/, const EnergyLedger& /*ledger*/) {}
    /// Once the sample's centered residual is filled in (one sample late).
    virtual void on_ledger(const EnergyLedger& /*ledger*/) {}
    virtual void on_finish(const RunReport& /*report*/) {}
};

struct RunOptions {
    LedgerDetail detail = LedgerDetail::full;
    std::size_t sample_every = 1;
    /// Growth verdict: ||v||^2_{H^2} + ||grad psi||^2_{H^2} above this
    /// multiple of its initial value.
    double blow_up_factor = 1e6;
    bool keep_ledger = true;
};

struct RunResult {
    RunReport report;
    FlowState final_state;
    std::vector<EnergyLedger> ledger;
};

/// Steps from `initial` to config.t_end, sampling the energy ledger.
/// Blow-up is recorded in the report, never thrown.
RunResult run(const FlowState& initial, const StepperConfig& config, const RunOptions& options = {},
              std::vector<RunObserver*> observers = {});

}  // namespace anisoflow
