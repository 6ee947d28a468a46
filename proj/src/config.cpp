#include "anisoflow/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>

#include "anisoflow/io.hpp"

namespace anisoflow {

using nlohmann::json;

SweepSpec HarnessConfig::resolved_sweep() const {
    SweepSpec s = sweep;
    s.base_config = stepper;
    s.base_init = init;
    s.options = run;
    return s;
}

HarnessConfig default_config() {
    HarnessConfig c;
    const char* env = std::getenv(kOutDirEnv);
    c.out_dir = env && *env ? env : "out";
    return c;
}

namespace {

void check_keys(const json& section, const std::string& name, const std::set<std::string>& allowed) {
    if (!section.is_object()) throw std::invalid_argument("config: section '" + name + "' must be an object");
    for (const auto& [key, value] : section.items()) {
        if (!allowed.count(key)) throw std::invalid_argument("config: unknown key '" + name + "." + key + "'");
    }
}

template <typename T>
void read(const json& section, const char* key, T& out) {
    if (section.contains(key)) out = section.at(key).get<T>();
}

}  // namespace

void apply_config(HarnessConfig& c, const json& doc) {
    check_keys(doc, "<root>", {"grid", "stepper", "init", "run", "sweep", "output"});
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        check_keys(g, "grid", {"n", "box_length"});
        if (g.contains("n")) {
            if (g["n"].is_array()) {
                c.grid = g["n"].get<std::array<int, 3>>();
            } else {
                const int n = g["n"].get<int>();
                c.grid = {n, n, n};
            }
        }
        read(g, "box_length", c.box_length);
    }
    if (doc.contains("stepper")) {
        const json& s = doc["stepper"];
        check_keys(s, "stepper", {"scheme", "dt_mode", "dt", "cfl_safety", "dt_max", "t_end", "dealias_every_stage"});
        if (s.contains("scheme")) c.stepper.scheme = parse_scheme(s["scheme"].get<std::string>());
        if (s.contains("dt_mode")) {
            const auto mode = s["dt_mode"].get<std::string>();
            if (mode == "fixed") {
                c.stepper.dt_mode = DtMode::fixed;
            } else if (mode == "cfl") {
                c.stepper.dt_mode = DtMode::cfl;
            } else {
                throw std::invalid_argument("config: dt_mode must be 'fixed' or 'cfl'");
            }
        }
        read(s, "dt", c.stepper.dt);
        read(s, "cfl_safety", c.stepper.cfl_safety);
        read(s, "dt_max", c.stepper.dt_max);
        read(s, "t_end", c.stepper.t_end);
        read(s, "dealias_every_stage", c.stepper.dealias_every_stage);
    }
    if (doc.contains("init")) {
        const json& s = doc["init"];
        check_keys(s, "init",
                   {"kind", "k_max", "amplitude_B0", "spectrum_slope", "seed", "psi_fraction", "mode", "checkpoint"});
        if (s.contains("kind")) c.init.kind = parse_init_kind(s["kind"].get<std::string>());
        read(s, "k_max", c.init.k_max);
        read(s, "amplitude_B0", c.init.amplitude_B0);
        read(s, "spectrum_slope", c.init.spectrum_slope);
        read(s, "seed", c.init.seed);
        read(s, "psi_fraction", c.init.psi_fraction);
        read(s, "mode", c.init.mode);
        read(s, "checkpoint", c.init.checkpoint_path);
    }
    if (doc.contains("run")) {
        const json& s = doc["run"];
        check_keys(s, "run", {"sample_every", "detail", "blow_up_factor"});
        read(s, "sample_every", c.run.sample_every);
        read(s, "blow_up_factor", c.run.blow_up_factor);
        if (s.contains("detail")) {
            const auto d = s["detail"].get<std::string>();
            if (d == "energy") {
                c.run.detail = LedgerDetail::energy;
            } else if (d == "full") {
                c.run.detail = LedgerDetail::full;
            } else {
                throw std::invalid_argument("config: detail must be 'energy' or 'full'");
            }
        }
    }
    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        check_keys(s, "sweep",
                   {"amplitudes", "trials_per_amplitude", "bisect", "bisect_width", "max_bisections", "threads"});
        read(s, "amplitudes", c.sweep.amplitudes);
        read(s, "trials_per_amplitude", c.sweep.trials_per_amplitude);
        read(s, "bisect", c.sweep.bisect);
        read(s, "bisect_width", c.sweep.bisect_width);
        read(s, "max_bisections", c.sweep.max_bisections);
        read(s, "threads", c.sweep.threads);
    }
    if (doc.contains("output")) {
        const json& s = doc["output"];
        check_keys(s, "output", {"out_dir", "checkpoint_every"});
        read(s, "out_dir", c.out_dir);
        read(s, "checkpoint_every", c.checkpoint_every);
    }
}

HarnessConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    HarnessConfig c = default_config();
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + std::string(e.what()));
    }
    apply_config(c, doc);
    return c;
}

json to_json(const HarnessConfig& c) {
    return {{"grid", {{"n", c.grid}, {"box_length", c.box_length}}},
            {"stepper", to_json(c.stepper)},
            {"init",
             {{"kind", to_string(c.init.kind)},
              {"k_max", c.init.k_max},
              {"amplitude_B0", c.init.amplitude_B0},
              {"spectrum_slope", c.init.spectrum_slope},
              {"seed", c.init.seed},
              {"psi_fraction", c.init.psi_fraction},
              {"mode", c.init.mode},
              {"checkpoint", c.init.checkpoint_path}}},
            {"run",
             {{"sample_every", c.run.sample_every},
              {"detail", c.run.detail == LedgerDetail::full ? "full" : "energy"},
              {"blow_up_factor", c.run.blow_up_factor}}},
            {"sweep",
             {{"amplitudes", c.sweep.amplitudes},
              {"trials_per_amplitude", c.sweep.trials_per_amplitude},
              {"bisect", c.sweep.bisect},
              {"bisect_width", c.sweep.bisect_width},
              {"max_bisections", c.sweep.max_bisections},
              {"threads", c.sweep.threads}}},
            {"output", {{"out_dir", c.out_dir}, {"checkpoint_every", c.checkpoint_every}}}};
}

}  // namespace anisoflow
