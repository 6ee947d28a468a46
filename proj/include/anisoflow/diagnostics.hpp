#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "anisoflow/state.hpp"

namespace anisoflow {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// `energy` evaluates only spectral sums; `full` adds the right-hand-side
/// inner products, physical-space norms, probe integrands and pressure.
enum class LedgerDetail { energy, full };

/// One sample of the energy budget. Norms are the standard H^s norms
/// (sum over |alpha| <= s); squared quantities carry the _sq suffix.
struct EnergyLedger {
    double t = 0.0;
    double E_mod = 0.0;
    double D_visc = 0.0;   // ||grad v||^2_{H^2}
    double D_v3 = 0.0;     // ||grad v3||^2_{H^1}
    double D_psi_h = 0.0;  // ||grad grad_h psi||^2_{H^1}
    /// Right-hand side of the energy identity in printed order, signs and
    /// 1/4 weights included, so that dE/dt + dissipation = sum(rhs_terms).
    std::array<double, 7> rhs_terms{kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
    double cross_term = 0.0;  // (v3 | lap psi)_{H^1}
    double v_H2_sq = 0.0;
    double grad_psi_H2_sq = 0.0;
    double lap_psi_H1_sq = 0.0;
    double grad_psi_H1_sq = 0.0;
    double grad_h_grad_psi_L2_sq = 0.0;
    double vertical_grad_psi_H1_sq = 0.0;  // ||d3 grad psi||^2_{H^1}
    double linf_grad_psi = kNaN;           // max_x |grad psi|
    double grad_psi_L4_4 = kNaN;           // int |grad psi|^4
    double hess_psi_L4_4 = kNaN;           // int |grad^2 psi|^4, Frobenius
    /// Spatial integrals of the vertical-derivative bound integrands:
    /// d3psi d3^3psi d3^3v3, d3^2psi d3^3psi d3^2v3, d3psi d3^3psi d3^2v3 d3^2psi,
    /// d3v3 (d3^3psi)^2, d3psi d3v3 (d3^3psi)^2.
    std::array<double, 5> probe_integrands{kNaN, kNaN, kNaN, kNaN, kNaN};
    double grad_p_H1 = kNaN;  // ||grad p||_{H^1}
    /// Centered-difference residual of the energy identity; NaN where no
    /// uniform three-point window exists.
    double residual = kNaN;

    double dissipation() const { return D_visc - 0.25 * D_v3 + 0.25 * D_psi_h; }
    double rhs_sum() const;
};

/// E = 1/2 (||v||^2_{H^2} + ||grad psi||^2_{H^2} + 1/4 ||lap psi||^2_{H^1}) + 1/4 (v3 | lap psi)_{H^1}
double modified_energy(const FlowState& state);

/// ||v||^2_{H^2} + ||grad psi||^2_{H^2} in a single pass over the modes.
double h2_energy(const FlowState& state);

/// B0 = ||grad psi||_{H^2} + ||v||_{H^2}
double b0_functional(const FlowState& state);

EnergyLedger compute_ledger(const FlowState& state, LedgerDetail detail = LedgerDetail::full);

/// Finite-difference residual of the energy identity at the window centre.
/// Accepts 3 records (second-order stencil) or 5 (fourth-order); spacing
/// must be uniform. Normalized by the largest term magnitude.
double energy_identity_residual(std::span<const EnergyLedger> window);

/// Normalized residuals of the two balance laws whose weighted sum is the
/// energy identity, with time derivatives obtained by substituting the
/// model tendency: the H^2 balance of (v, grad psi), the cross balance
/// of (lap psi, v3 lap psi), and their 1 : 1/4 combination.
struct SubidentityResiduals {
    double h2_balance = 0.0;
    double cross_balance = 0.0;
    double energy_identity = 0.0;
};

SubidentityResiduals energy_subidentities(const FlowState& state);

/// B_T from a sample series:
/// sup (||v||^2_{H^2} + ||grad psi||^2_{H^2}) + int ||grad v||^2_{H^2} + int ||grad_h grad psi||^2_{H^1}.
/// Throws std::invalid_argument on an empty series.
double bt_functional(std::span<const EnergyLedger> series);
/// Running B_T at every sample.
std::vector<double> bt_series(std::span<const EnergyLedger> series);

/// LHS / RHS of the three interpolation inequalities, without constants:
///   ||grad psi||_{L4 L4}     vs ||grad_h grad psi||^{1/2}_{L2 L2} ||grad psi||^{1/2}_{Linf H1}
///   ||grad^2 psi||_{L4 L4}   vs ||grad_h grad psi||^{1/2}_{L2 H1} ||grad psi||^{1/2}_{Linf H2}
///   ||grad psi||_{L4 Linf}   vs the same right side as the second.
/// 0/0 reports 0; x/0 with x > 0 reports +inf and sets `anomaly`.
struct InequalityRatios {
    std::array<double, 3> lhs{};
    std::array<double, 3> rhs{};
    std::array<double, 3> ratios{};
    bool anomaly = false;
};

InequalityRatios interpolation_ratios(std::span<const EnergyLedger> series);

/// Vertical-derivative bound probes: left sides are |int_0^T int integrand|
/// (the first sums integrands 0..2), right sides are the norm products the
/// bounds use.
struct ProbeReport {
    std::array<double, 3> lhs{};
    std::array<double, 3> rhs{};
    std::array<double, 3> ratios{};
    bool anomaly = false;
};

ProbeReport bound_probe(std::span<const EnergyLedger> series);

/// Trapezoid integral of a ledger column.
template <typename Getter>
double time_integral(std::span<const EnergyLedger> series, Getter get) {
    double total = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        total += 0.5 * (series[i].t - series[i - 1].t) * (get(series[i]) + get(series[i - 1]));
    }
    return total;
}

enum class Termination { completed, blow_up_nonfinite, blow_up_growth };

const char* to_string(Termination t);

/// Trajectory-level aggregates.
struct RunReport {
    double B0 = 0.0;
    double B_T = 0.0;
    double sup_energy_ratio = 0.0;
    double identity_residual_max = kNaN;
    double identity_residual_rms = kNaN;
    InequalityRatios interpolation{};
    ProbeReport probe{};
    /// (B_T^2 - ||v0||^2_{H^2} - ||grad psi0||^2_{H^2}) / (B_T^3 (1 + B_T)^2)
    double a_priori_quantity = 0.0;
    double sup_grad_p_H1 = kNaN;
    double pressure_ratio = kNaN;  // sup ||grad p||_{H^1} / B0
    double horizontal_dissipation_integral = 0.0;
    double horizontal_dissipation_tail_fraction = 0.0;  // share gained over the final quarter
    double vertical_gradient_integral = 0.0;
    Termination termination = Termination::completed;
    double blow_up_time = kNaN;
    std::size_t steps = 0;
    double t_final = 0.0;

    bool bounded() const { return termination == Termination::completed; }
};

/// Aggregates a sample series. `energy0_sq` is ||v0||^2_{H^2} + ||grad psi0||^2_{H^2}.
RunReport summarize(std::span<const EnergyLedger> series, double b0, double energy0_sq);

}  // namespace anisoflow
