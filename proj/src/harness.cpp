#include "anisoflow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "anisoflow/checkpoint.hpp"
#include "anisoflow/diagnostics.hpp"
#include "anisoflow/model.hpp"
#include "anisoflow/spectral.hpp"

namespace anisoflow {

InitKind parse_init_kind(const std::string& name) {
    if (name == "random_band") return InitKind::random_band;
    if (name == "single_mode") return InitKind::single_mode;
    if (name == "checkpoint") return InitKind::checkpoint;
    throw std::invalid_argument("unknown initial-data kind '" + name + "'");
}

const char* to_string(InitKind kind) {
    switch (kind) {
        case InitKind::random_band: return "random_band";
        case InitKind::single_mode: return "single_mode";
        case InitKind::checkpoint: return "checkpoint";
    }
    return "unknown";
}

void InitSpec::validate(const SpectralGrid& grid) const {
    if (!(amplitude_B0 >= 0.0) || !std::isfinite(amplitude_B0)) {
        throw std::invalid_argument("amplitude_B0 must be finite and non-negative");
    }
    if (!(psi_fraction >= 0.0 && psi_fraction <= 1.0)) throw std::invalid_argument("psi_fraction must lie in [0, 1]");
    if (kind == InitKind::random_band) {
        if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
        if (!grid.band_contains(k_max, k_max, k_max)) {
            throw std::invalid_argument("k_max = " + std::to_string(k_max) + " exceeds the dealias band (limit " +
                                        std::to_string(grid.dealias_limit()) + ")");
        }
        if (!std::isfinite(spectrum_slope)) throw std::invalid_argument("spectrum_slope must be finite");
    } else if (kind == InitKind::single_mode) {
        if (mode == std::array<int, 3>{0, 0, 0}) throw std::invalid_argument("single mode must be nonzero");
        if (!grid.band_contains(mode[0], mode[1], mode[2])) {
            throw std::invalid_argument("single mode lies outside the dealias band");
        }
    } else if (checkpoint_path.empty()) {
        throw std::invalid_argument("checkpoint initial data needs a path");
    }
}

namespace {

double grad_norm_h2(const SpectralField& psi) {
    double sq = 0.0;
    for (int j = 1; j <= 3; ++j) sq += sobolev_norm_sq(derivative(psi, j), 2);
    return std::sqrt(sq);
}

double vector_norm_h2(const VectorField& v) {
    return std::sqrt(sobolev_norm_sq(v[0], 2) + sobolev_norm_sq(v[1], 2) + sobolev_norm_sq(v[2], 2));
}

/// Rescales psi and v so that ||grad psi||_{H^2} = f B0 and ||v||_{H^2} = (1 - f) B0.
void rescale(FlowState& s, double b0, double psi_fraction) {
    const double gp = grad_norm_h2(s.psi);
    const double gv = vector_norm_h2(s.v);
    const double target_psi = psi_fraction * b0;
    const double target_v = (1.0 - psi_fraction) * b0;
    s.psi *= gp > 0.0 ? target_psi / gp : 0.0;
    for (auto& c : s.v) c *= gv > 0.0 ? target_v / gv : 0.0;
}

bool is_representative(int k1, int k2, int k3) {
    return k3 > 0 || (k3 == 0 && (k2 > 0 || (k2 == 0 && k1 > 0)));
}

FlowState random_band(const GridPtr& grid, const InitSpec& spec) {
    FlowState s = FlowState::zero(grid);
    VectorField w = zero_vector(grid);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int K = spec.k_max;
    for (int k1 = -K; k1 <= K; ++k1) {
        for (int k2 = -K; k2 <= K; ++k2) {
            for (int k3 = 0; k3 <= K; ++k3) {
                const int ksq = k1 * k1 + k2 * k2 + k3 * k3;
                if (ksq == 0 || ksq > K * K || !is_representative(k1, k2, k3)) continue;
                const double amp = std::pow(std::sqrt(static_cast<double>(ksq)), spec.spectrum_slope);
                double draw[8];
                for (double& d : draw) d = normal(rng);
                s.psi.set_mode(k1, k2, k3, amp * Complex{draw[0], draw[1]});
                for (int i = 0; i < 3; ++i) w[i].set_mode(k1, k2, k3, amp * Complex{draw[2 + 2 * i], draw[3 + 2 * i]});
            }
        }
    }
    s.v = leray_project(w);
    return s;
}

FlowState single_mode(const GridPtr& grid, const InitSpec& spec) {
    FlowState s = FlowState::zero(grid);
    const auto [k1, k2, k3] = spec.mode;
    s.psi.set_mode(k1, k2, k3, Complex{0.5, 0.0});
    std::array<double, 3> e = (k1 == 0 && k2 == 0) ? std::array<double, 3>{1.0, 0.0, 0.0}
                                                   : std::array<double, 3>{0.0, 0.0, 1.0};
    const double k[3] = {double(k1), double(k2), double(k3)};
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const double ke = k[0] * e[0] + k[1] * e[1] + k[2] * e[2];
    for (int i = 0; i < 3; ++i) s.v[i].set_mode(k1, k2, k3, Complex{0.5 * (e[i] - k[i] * ke / kk), 0.0});
    return s;
}

}  // namespace

FlowState generate_initial(const GridPtr& grid, const InitSpec& spec) {
    if (!grid) throw std::invalid_argument("generate_initial: null grid");
    spec.validate(*grid);
    if (spec.kind == InitKind::checkpoint) return read_checkpoint(spec.checkpoint_path, grid).state;

    FlowState s = spec.kind == InitKind::random_band ? random_band(grid, spec) : single_mode(grid, spec);
    reenforce_invariants(s);
    rescale(s, spec.amplitude_B0, spec.psi_fraction);
    return s;
}

void SweepSpec::validate() const {
    if (amplitudes.empty()) throw std::invalid_argument("sweep needs at least one amplitude");
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        if (!(amplitudes[i] >= 0.0)) throw std::invalid_argument("sweep amplitudes must be non-negative");
        if (i > 0 && !(amplitudes[i] > amplitudes[i - 1])) {
            throw std::invalid_argument("sweep amplitudes must be strictly increasing");
        }
    }
    if (trials_per_amplitude < 1) throw std::invalid_argument("trials_per_amplitude must be at least 1");
    if (bisect && !(bisect_width > 0.0 && bisect_width < 1.0)) {
        throw std::invalid_argument("bisect_width must lie in (0, 1)");
    }
    base_config.validate();
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

std::vector<SweepRow> run_amplitudes(const GridPtr& grid, const SweepSpec& spec, const std::vector<double>& amps,
                                     bool from_bisection) {
    const std::size_t trials = static_cast<std::size_t>(spec.trials_per_amplitude);
    std::vector<RunReport> reports(amps.size() * trials);
    RunOptions options = spec.options;
    options.keep_ledger = false;
    parallel_for(reports.size(), spec.threads, [&](std::size_t i) {
        InitSpec init = spec.base_init;
        init.amplitude_B0 = amps[i / trials];
        init.seed = spec.base_init.seed + i % trials;
        reports[i] = run(generate_initial(grid, init), spec.base_config, options).report;
    });

    std::vector<SweepRow> rows;
    for (std::size_t a = 0; a < amps.size(); ++a) {
        SweepRow row;
        row.amplitude = amps[a];
        row.trials = static_cast<int>(trials);
        row.from_bisection = from_bisection;
        for (std::size_t j = 0; j < trials; ++j) {
            const RunReport& r = reports[a * trials + j];
            if (!r.bounded()) {
                row.bounded = false;
                if (std::isnan(row.earliest_blow_up) || r.blow_up_time < row.earliest_blow_up) {
                    row.earliest_blow_up = r.blow_up_time;
                }
                continue;
            }
            ++row.bounded_trials;
            row.bt_over_b0 = std::max(row.bt_over_b0, r.B0 > 0.0 ? r.B_T / r.B0 : 0.0);
            row.sup_energy_ratio = std::max(row.sup_energy_ratio, r.sup_energy_ratio);
            if (!std::isnan(r.identity_residual_max)) {
                row.identity_residual_max = std::isnan(row.identity_residual_max)
                                                ? r.identity_residual_max
                                                : std::max(row.identity_residual_max, r.identity_residual_max);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

/// Largest bounded amplitude below the smallest blown-up one.
std::optional<std::array<double, 2>> find_bracket(const std::vector<SweepRow>& rows) {
    auto first_bad = std::find_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.bounded; });
    if (first_bad == rows.begin() || first_bad == rows.end()) return std::nullopt;
    return std::array<double, 2>{std::prev(first_bad)->amplitude, first_bad->amplitude};
}

}  // namespace

SweepResult amplitude_sweep(const GridPtr& grid, const SweepSpec& spec) {
    spec.validate();
    SweepResult out;
    out.rows = run_amplitudes(grid, spec, spec.amplitudes, false);
    out.bracket = find_bracket(out.rows);

    while (spec.bisect && out.bracket && out.bisections < spec.max_bisections) {
        auto [lo, hi] = *out.bracket;
        if ((hi - lo) / hi <= spec.bisect_width) break;
        const double mid = 0.5 * (lo + hi);
        const SweepRow row = run_amplitudes(grid, spec, {mid}, true).front();
        ++out.bisections;
        auto pos = std::lower_bound(out.rows.begin(), out.rows.end(), mid,
                                    [](const SweepRow& r, double a) { return r.amplitude < a; });
        out.rows.insert(pos, row);
        out.bracket = row.bounded ? std::array<double, 2>{mid, hi} : std::array<double, 2>{lo, mid};
    }
    return out;
}

PressureSummary pressure_report(const FlowState& state) {
    PressureSummary out;
    const SpectralField p = pressure_solve(state);
    double sq = 0.0;
    for (int j = 1; j <= 3; ++j) sq += sobolev_norm_sq(derivative(p, j), 1);
    out.grad_p_H1 = std::sqrt(sq);
    out.B0 = b0_functional(state);
    out.ratio = out.B0 > 0.0 ? out.grad_p_H1 / out.B0 : (out.grad_p_H1 == 0.0 ? 0.0 : kNaN);
    return out;
}

}  // namespace anisoflow
