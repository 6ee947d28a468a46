#pragma once

#include <array>
#include <cstddef>
#include <string>

#include <json.hpp>

#include "anisoflow/harness.hpp"
#include "anisoflow/integrator.hpp"

namespace anisoflow {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "ANISOFLOW_OUT_DIR";

struct HarnessConfig {
    std::array<int, 3> grid{32, 32, 32};
    double box_length = 6.283185307179586;
    StepperConfig stepper;
    InitSpec init;
    RunOptions run;
    SweepSpec sweep;  // base_config/base_init/options are filled from the sections above
    std::string out_dir;
    std::size_t checkpoint_every = 0;

    /// Copies stepper/init/run into the sweep's base fields.
    SweepSpec resolved_sweep() const;
};

/// Defaults, with out_dir taken from the environment when set, else "out".
HarnessConfig default_config();

/// Overlays a JSON document onto `config`. Sections and keys:
///   grid:    n (int or [n1, n2, n3]), box_length
///   stepper: scheme, dt_mode ("fixed" | "cfl"), dt, cfl_safety, dt_max, t_end, dealias_every_stage
///   init:    kind, k_max, amplitude_B0, spectrum_slope, seed, psi_fraction, mode, checkpoint
///   run:     sample_every, detail ("energy" | "full"), blow_up_factor
///   sweep:   amplitudes, trials_per_amplitude, bisect, bisect_width, max_bisections, threads
///   output:  out_dir, checkpoint_every
/// Unknown sections or keys are rejected with std::invalid_argument.
void apply_config(HarnessConfig& config, const nlohmann::json& doc);

HarnessConfig load_config(const std::string& path);

nlohmann::json to_json(const HarnessConfig& config);

}  // namespace anisoflow
