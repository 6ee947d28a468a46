#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "anisoflow/integrator.hpp"
#include "anisoflow/state.hpp"

namespace anisoflow {

enum class InitKind { random_band, single_mode, checkpoint };

InitKind parse_init_kind(const std::string& name);
const char* to_string(InitKind kind);

struct InitSpec {
    InitKind kind = InitKind::random_band;
    int k_max = 3;
    double amplitude_B0 = 0.05;
    double spectrum_slope = -2.0;  // |coefficient| ~ |k|^slope inside the band
    std::uint64_t seed = 1;
    /// Share of B0 carried by ||grad psi0||_{H^2}; the rest goes to ||v0||_{H^2}.
    double psi_fraction = 0.5;
    /// single_mode: psi0 ~ cos(k.x), v0 a divergence-free cos(k.x) profile.
    std::array<int, 3> mode{1, 0, 0};
    std::string checkpoint_path;

    /// Throws std::invalid_argument on a band outside the dealias mask,
    /// negative amplitude or a psi_fraction outside [0, 1].
    void validate(const SpectralGrid& grid) const;
};

/// Mean-free, Hermitian, divergence-free initial data whose B0 equals
/// amplitude_B0. Random draws walk the integer lattice in a fixed order,
/// so the same seed yields the same continuous field on every grid that
/// resolves the band.
FlowState generate_initial(const GridPtr& grid, const InitSpec& spec);

struct SweepSpec {
    std::vector<double> amplitudes;  // positive, strictly increasing
    int trials_per_amplitude = 1;    // trial j uses seed base_init.seed + j
    StepperConfig base_config;       // t_end of the trials
    InitSpec base_init;
    RunOptions options;
    /// Bisect between the largest bounded and the smallest blown-up listed
    /// amplitude until (hi - lo) / hi <= bisect_width.
    bool bisect = false;
    double bisect_width = 0.05;
    int max_bisections = 30;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

struct SweepRow {
    double amplitude = 0.0;
    int trials = 0;
    int bounded_trials = 0;
    bool bounded = true;              // every trial completed
    double bt_over_b0 = 0.0;          // max over bounded trials
    double sup_energy_ratio = 0.0;    // max over bounded trials
    double identity_residual_max = kNaN;
    double earliest_blow_up = kNaN;
    bool from_bisection = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by amplitude
    /// Final (bounded, blow-up) amplitude bracket, when one exists.
    std::optional<std::array<double, 2>> bracket;
    int bisections = 0;
};

/// Runs every (amplitude, trial) pair on a worker pool; rows come back in
/// amplitude order regardless of completion order.
SweepResult amplitude_sweep(const GridPtr& grid, const SweepSpec& spec);

struct PressureSummary {
    double grad_p_H1 = 0.0;
    double B0 = 0.0;
    double ratio = 0.0;  // grad_p_H1 / B0, 0 when both vanish
};

PressureSummary pressure_report(const FlowState& state);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace anisoflow
