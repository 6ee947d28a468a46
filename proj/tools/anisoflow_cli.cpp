// Command-line driver: run, sweep, verify and resume.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "anisoflow/checkpoint.hpp"
#include "anisoflow/config.hpp"
#include "anisoflow/harness.hpp"
#include "anisoflow/io.hpp"
#include "anisoflow/verify.hpp"

namespace fs = std::filesystem;
using namespace anisoflow;

namespace {

struct Overrides {
    std::string config_path;
    std::string grid;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::string scheme;
    std::optional<std::uint64_t> seed;
    std::optional<double> b0;
    std::optional<int> k_max;
    std::string sweep;
    std::string out_dir;
    std::optional<std::size_t> checkpoint_every;
    std::string resume;
    bool cfl = false;
    std::optional<std::size_t> sample_every;
};

std::array<int, 3> parse_grid(const std::string& text) {
    std::array<int, 3> dims{};
    std::stringstream in(text);
    std::string part;
    int count = 0;
    while (std::getline(in, part, 'x')) {
        if (count == 3) throw CLI::ValidationError("--grid", "expected N or N1xN2xN3");
        dims[count++] = std::stoi(part);
    }
    if (count == 1) dims = {dims[0], dims[0], dims[0]};
    else if (count != 3) throw CLI::ValidationError("--grid", "expected N or N1xN2xN3");
    return dims;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) out.push_back(std::stod(part));
    return out;
}

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--grid", o.grid, "resolution: N or N1xN2xN3");
    cmd->add_option("--dt", o.dt, "fixed time step");
    cmd->add_flag("--cfl", o.cfl, "choose dt from the CFL condition instead of --dt");
    cmd->add_option("--t-end", o.t_end, "final time");
    cmd->add_option("--scheme", o.scheme, "IFRK2 or IFRK4");
    cmd->add_option("--seed", o.seed, "random seed of the initial data");
    cmd->add_option("--b0", o.b0, "initial amplitude B0");
    cmd->add_option("--k-max", o.k_max, "largest wavenumber shell of the initial data");
    cmd->add_option("--out-dir", o.out_dir, std::string("output directory (default $") + kOutDirEnv + " or ./out)");
    cmd->add_option("--sample-every", o.sample_every, "ledger cadence in steps");
}

HarnessConfig resolve(const Overrides& o) {
    HarnessConfig c = o.config_path.empty() ? default_config() : load_config(o.config_path);
    if (!o.grid.empty()) c.grid = parse_grid(o.grid);
    if (o.dt) {
        c.stepper.dt = *o.dt;
        c.stepper.dt_mode = DtMode::fixed;
    }
    if (o.cfl) c.stepper.dt_mode = DtMode::cfl;
    if (o.t_end) c.stepper.t_end = *o.t_end;
    if (!o.scheme.empty()) c.stepper.scheme = parse_scheme(o.scheme);
    if (o.seed) c.init.seed = *o.seed;
    if (o.b0) c.init.amplitude_B0 = *o.b0;
    if (o.k_max) c.init.k_max = *o.k_max;
    if (!o.sweep.empty()) c.sweep.amplitudes = parse_list(o.sweep);
    if (!o.out_dir.empty()) c.out_dir = o.out_dir;
    if (o.checkpoint_every) c.checkpoint_every = *o.checkpoint_every;
    if (o.sample_every) c.run.sample_every = *o.sample_every;
    return c;
}

void print_report(const RunReport& r) {
    std::printf("verdict            %s", r.bounded() ? "bounded" : to_string(r.termination));
    if (!r.bounded()) std::printf(" at t = %.6g", r.blow_up_time);
    std::printf("\nsteps              %zu (t = %.6g)\n", r.steps, r.t_final);
    std::printf("B0                 %.6e\n", r.B0);
    std::printf("B_T                %.6e\n", r.B_T);
    std::printf("sup E / E(0)       %.6f\n", r.sup_energy_ratio);
    std::printf("identity residual  max %.3e  rms %.3e\n", r.identity_residual_max, r.identity_residual_rms);
    std::printf("pressure ratio     %.6e\n", r.pressure_ratio);
}

int run_trajectory(const HarnessConfig& c, FlowState initial) {
    fs::create_directories(c.out_dir);
    const auto csv = (fs::path(c.out_dir) / "ledger.csv").string();
    CsvLedgerSink sink(csv);
    std::vector<RunObserver*> observers{&sink};
    std::optional<CheckpointWriter> writer;
    if (c.checkpoint_every > 0) {
        writer.emplace((fs::path(c.out_dir) / "checkpoints").string(), c.checkpoint_every, c.stepper.scheme);
        observers.push_back(&*writer);
    }
    RunOptions options = c.run;
    options.keep_ledger = false;
    const RunResult result = run(initial, c.stepper, options, observers);

    nlohmann::json summary = to_json(result.report);
    summary["config"] = to_json(c);
    write_json((fs::path(c.out_dir) / "report.json").string(), summary);
    print_report(result.report);
    std::printf("wrote %s and report.json to %s\n", "ledger.csv", c.out_dir.c_str());
    return 0;
}

int cmd_run(const Overrides& o) {
    const HarnessConfig c = resolve(o);
    const GridPtr grid = SpectralGrid::create(c.grid[0], c.grid[1], c.grid[2], c.box_length);
    return run_trajectory(c, generate_initial(grid, c.init));
}

int cmd_resume(const Overrides& o) {
    HarnessConfig c = resolve(o);
    const Checkpoint cp = read_checkpoint(o.resume);
    if (o.scheme.empty()) c.stepper.scheme = cp.scheme;
    const auto& g = *cp.state.grid();
    c.grid = g.dims();
    c.box_length = g.box_length();
    if (c.stepper.t_end <= cp.state.t) {
        std::fprintf(stderr, "checkpoint time %.6g is already past --t-end %.6g\n", cp.state.t, c.stepper.t_end);
        return 2;
    }
    return run_trajectory(c, cp.state);
}

int cmd_sweep(const Overrides& o, double bisect_width) {
    HarnessConfig c = resolve(o);
    if (bisect_width > 0.0) {
        c.sweep.bisect = true;
        c.sweep.bisect_width = bisect_width;
    }
    const GridPtr grid = SpectralGrid::create(c.grid[0], c.grid[1], c.grid[2], c.box_length);
    const SweepResult result = amplitude_sweep(grid, c.resolved_sweep());

    fs::create_directories(c.out_dir);
    std::FILE* csv = std::fopen((fs::path(c.out_dir) / "sweep.csv").string().c_str(), "w");
    if (!csv) throw std::runtime_error("cannot write sweep.csv");
    std::fprintf(csv, "amplitude,trials,bounded_trials,verdict,bt_over_b0,sup_energy_ratio,identity_residual_max,"
                      "earliest_blow_up,from_bisection\n");
    nlohmann::json rows = nlohmann::json::array();
    std::printf("%-14s %-8s %-12s %-12s %-12s\n", "B0", "verdict", "B_T/B0", "supE/E0", "residual");
    for (const auto& r : result.rows) {
        std::fprintf(csv, "%.17g,%d,%d,%s,%.17g,%.17g,%.17g,%.17g,%d\n", r.amplitude, r.trials, r.bounded_trials,
                     r.bounded ? "bounded" : "blow_up", r.bt_over_b0, r.sup_energy_ratio, r.identity_residual_max,
                     r.earliest_blow_up, r.from_bisection ? 1 : 0);
        std::printf("%-14.6e %-8s %-12.5g %-12.5g %-12.3e\n", r.amplitude, r.bounded ? "bounded" : "blow_up",
                    r.bt_over_b0, r.sup_energy_ratio, r.identity_residual_max);
        rows.push_back({{"amplitude", r.amplitude},
                        {"trials", r.trials},
                        {"bounded_trials", r.bounded_trials},
                        {"verdict", r.bounded ? "bounded" : "blow_up"},
                        {"bt_over_b0", r.bt_over_b0},
                        {"sup_energy_ratio", r.sup_energy_ratio},
                        {"identity_residual_max", std::isnan(r.identity_residual_max)
                                                      ? nlohmann::json(nullptr)
                                                      : nlohmann::json(r.identity_residual_max)},
                        {"earliest_blow_up", std::isnan(r.earliest_blow_up) ? nlohmann::json(nullptr)
                                                                             : nlohmann::json(r.earliest_blow_up)},
                        {"from_bisection", r.from_bisection}});
    }
    std::fclose(csv);
    nlohmann::json summary{{"rows", rows}, {"bisections", result.bisections}, {"config", to_json(c)}};
    if (result.bracket) {
        summary["bracket"] = *result.bracket;
        std::printf("threshold bracket [%.6e, %.6e]\n", (*result.bracket)[0], (*result.bracket)[1]);
    } else {
        summary["bracket"] = nullptr;
    }
    write_json((fs::path(c.out_dir) / "sweep.json").string(), summary);
    return 0;
}

int cmd_verify(const Overrides& o, int states) {
    const HarnessConfig c = resolve(o);
    const GridPtr grid = SpectralGrid::create(c.grid[0], c.grid[1], c.grid[2], c.box_length);
    const auto results = verify_suite(grid, c.init.seed, states, c.out_dir);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] %-48s %.3e (tol %.1e)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.value, r.tolerance);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral solver and verification harness for the perturbed complex-fluid system"};
    app.require_subcommand(1);

    Overrides run_o, sweep_o, verify_o, resume_o;
    auto* run_cmd = app.add_subcommand("run", "integrate one trajectory, writing ledger.csv and report.json");
    add_common(run_cmd, run_o);
    run_cmd->add_option("--checkpoint-every", run_o.checkpoint_every, "checkpoint cadence in steps (0: off)");

    double bisect_width = 0.0;
    auto* sweep_cmd = app.add_subcommand("sweep", "amplitude sweep with optional bisection of the threshold");
    add_common(sweep_cmd, sweep_o);
    sweep_cmd->add_option("--sweep", sweep_o.sweep, "comma-separated increasing B0 values");
    sweep_cmd->add_option("--bisect", bisect_width, "refine the bounded/blow-up bracket to this relative width");

    int states = 10;
    auto* verify_cmd = app.add_subcommand("verify", "property battery; exit code 0 iff every check passes");
    add_common(verify_cmd, verify_o);
    verify_cmd->add_option("--states", states, "random states per check")->check(CLI::PositiveNumber);

    auto* resume_cmd = app.add_subcommand("resume", "continue a run from a checkpoint");
    add_common(resume_cmd, resume_o);
    resume_cmd->add_option("--resume", resume_o.resume, "checkpoint file")->required()->check(CLI::ExistingFile);
    resume_cmd->add_option("--checkpoint-every", resume_o.checkpoint_every, "checkpoint cadence in steps (0: off)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run_cmd) return cmd_run(run_o);
        if (*sweep_cmd) return cmd_sweep(sweep_o, bisect_width);
        if (*verify_cmd) return cmd_verify(verify_o, states);
        if (*resume_cmd) return cmd_resume(resume_o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
