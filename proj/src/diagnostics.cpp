#include "anisoflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anisoflow/model.hpp"
#include "anisoflow/spectral.hpp"
#include "anisoflow/summation.hpp"

namespace anisoflow {

double EnergyLedger::rhs_sum() const {
    double s = 0.0;
    for (double r : rhs_terms) s += r;
    return s;
}

namespace {

VectorField gradient(const SpectralField& f) { return {derivative(f, 1), derivative(f, 2), derivative(f, 3)}; }

double vector_inner(const VectorField& a, const VectorField& b, int s) {
    return sobolev_inner(a[0], b[0], s) + sobolev_inner(a[1], b[1], s) + sobolev_inner(a[2], b[2], s);
}

/// ||grad f||^2_{H^s}
double gradient_norm_sq(const SpectralField& f, int s) {
    const auto g = gradient(f);
    return vector_inner(g, g, s);
}

/// ||grad_h grad f||^2_{H^s}
double horizontal_hessian_norm_sq(const SpectralField& f, int s) {
    double total = 0.0;
    for (int i = 1; i <= 2; ++i) total += gradient_norm_sq(derivative(f, i), s);
    return total;
}

SpectralField d3_power(const SpectralField& f, int order) {
    SpectralField out = f;
    for (int i = 0; i < order; ++i) out = derivative(out, 3);
    return out;
}

struct SpectralNorms {
    double v_H2_sq, grad_psi_H2_sq, lap_psi_H1_sq, cross, D_visc, D_v3, D_psi_h;
};

SpectralNorms spectral_norms(const FlowState& s) {
    const SpectralField lap_psi = laplacian(s.psi);
    SpectralNorms n{};
    n.v_H2_sq = vector_inner(s.v, s.v, 2);
    n.grad_psi_H2_sq = gradient_norm_sq(s.psi, 2);
    n.lap_psi_H1_sq = sobolev_norm_sq(lap_psi, 1);
    n.cross = sobolev_inner(s.v[2], lap_psi, 1);
    n.D_visc = gradient_norm_sq(s.v[0], 2) + gradient_norm_sq(s.v[1], 2) + gradient_norm_sq(s.v[2], 2);
    n.D_v3 = gradient_norm_sq(s.v[2], 1);
    n.D_psi_h = horizontal_hessian_norm_sq(s.psi, 1);
    return n;
}

double energy_from(const SpectralNorms& n) {
    return 0.5 * (n.v_H2_sq + n.grad_psi_H2_sq + 0.25 * n.lap_psi_H1_sq) + 0.25 * n.cross;
}

/// Right-hand-side inner products, unweighted, in printed order.
struct RhsInner {
    double adv_v_H2;       // (v.grad v | v)_{H^2}
    double adv_psi_H2;     // (v.grad psi | lap psi)_{H^2}
    double stress_v_H2;    // (div(grad psi (x) grad psi) | v)_{H^2}
    double adv_v3_H1;      // (v.grad v3 | lap psi)_{H^1}
    double fv_H1;          // (f_v | lap psi)_{H^1}
    double grad_mix_H1;    // (grad v3 | grad(v.grad psi))_{H^1}
    double lap_adv_H1;     // (lap(v.grad psi) | lap psi)_{H^1}
};

RhsInner rhs_inner(const FlowState& s, const SubstitutedForm& form) {
    const SpectralField lap_psi = laplacian(s.psi);
    RhsInner r{};
    r.adv_v_H2 = vector_inner(form.advection, s.v, 2);
    r.adv_psi_H2 = sobolev_inner(form.psi_transport, lap_psi, 2);
    r.stress_v_H2 = vector_inner(form.stress_divergence, s.v, 2);
    r.adv_v3_H1 = sobolev_inner(form.advection[2], lap_psi, 1);
    r.fv_H1 = sobolev_inner(form.forcing.f_v, lap_psi, 1);
    r.grad_mix_H1 = vector_inner(gradient(s.v[2]), gradient(form.psi_transport), 1);
    r.lap_adv_H1 = sobolev_inner(laplacian(form.psi_transport), lap_psi, 1);
    return r;
}

std::array<double, 7> weighted_terms(const RhsInner& r) {
    return {-r.adv_v_H2,         r.adv_psi_H2,        -r.stress_v_H2,      -0.25 * r.adv_v3_H1,
            0.25 * r.fv_H1,      0.25 * r.grad_mix_H1, -0.25 * r.lap_adv_H1};
}

double normalized(double lhs, double rhs, std::initializer_list<double> terms) {
    double scale = 1e-30;
    for (double t : terms) scale = std::max(scale, std::abs(t));
    return std::abs(lhs - rhs) / scale;
}

/// |grad psi|, |grad^2 psi| and the probe integrands in physical space.
void physical_diagnostics(const FlowState& s, EnergyLedger& out) {
    const auto& g = *s.grid();
    const double dV = g.volume() / static_cast<double>(g.physical_size());
    std::array<RealField, 3> grad;
    for (int j = 0; j < 3; ++j) grad[j] = inverse_transform(derivative(s.psi, j + 1));
    std::array<RealField, 6> hess;
    const int pairs[6][2] = {{1, 1}, {2, 2}, {3, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int p = 0; p < 6; ++p) {
        hess[p] = inverse_transform(derivative(derivative(s.psi, pairs[p][0]), pairs[p][1]));
    }
    const RealField& d1psi3 = grad[2];
    const RealField& d2psi3 = hess[2];
    const RealField d3psi3 = inverse_transform(d3_power(s.psi, 3));
    const RealField d1v3 = inverse_transform(d3_power(s.v[2], 1));
    const RealField d2v3 = inverse_transform(d3_power(s.v[2], 2));
    const RealField d3v3 = inverse_transform(d3_power(s.v[2], 3));

    double linf = 0.0;
    CompensatedSum l4, h4;
    std::array<CompensatedSum, 5> probes;
    for (std::size_t x = 0; x < g.physical_size(); ++x) {
        const double gsq = grad[0][x] * grad[0][x] + grad[1][x] * grad[1][x] + grad[2][x] * grad[2][x];
        linf = std::max(linf, std::sqrt(gsq));
        l4.add(gsq * gsq);
        double hsq = 0.0;
        for (int p = 0; p < 6; ++p) hsq += (p < 3 ? 1.0 : 2.0) * hess[p][x] * hess[p][x];
        h4.add(hsq * hsq);
        const double a = d1psi3[x], b = d2psi3[x], c = d3psi3[x];
        probes[0].add(a * c * d3v3[x]);
        probes[1].add(b * c * d2v3[x]);
        probes[2].add(a * c * d2v3[x] * b);
        probes[3].add(d1v3[x] * c * c);
        probes[4].add(a * d1v3[x] * c * c);
    }
    out.linf_grad_psi = linf;
    out.grad_psi_L4_4 = l4.value() * dV;
    out.hess_psi_L4_4 = h4.value() * dV;
    for (int i = 0; i < 5; ++i) out.probe_integrands[i] = probes[i].value() * dV;
}

}  // namespace

double modified_energy(const FlowState& state) { return energy_from(spectral_norms(state)); }

double h2_energy(const FlowState& s) {
    const auto& g = *s.grid();
    CompensatedSum sum;
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        const double amp = std::norm(s.v[0][m]) + std::norm(s.v[1][m]) + std::norm(s.v[2][m]) +
                           g.k_squared(m) * std::norm(s.psi[m]);
        sum.add(g.hermitian_weight(m) * g.sobolev_multiplier(2, m) * amp);
    }
    return g.volume() * sum.value();
}

double b0_functional(const FlowState& state) {
    return std::sqrt(gradient_norm_sq(state.psi, 2)) + std::sqrt(vector_inner(state.v, state.v, 2));
}

EnergyLedger compute_ledger(const FlowState& state, LedgerDetail detail) {
    const SpectralNorms n = spectral_norms(state);
    EnergyLedger out;
    out.t = state.t;
    out.E_mod = energy_from(n);
    out.D_visc = n.D_visc;
    out.D_v3 = n.D_v3;
    out.D_psi_h = n.D_psi_h;
    out.cross_term = n.cross;
    out.v_H2_sq = n.v_H2_sq;
    out.grad_psi_H2_sq = n.grad_psi_H2_sq;
    out.lap_psi_H1_sq = n.lap_psi_H1_sq;
    out.grad_psi_H1_sq = gradient_norm_sq(state.psi, 1);
    out.grad_h_grad_psi_L2_sq = horizontal_hessian_norm_sq(state.psi, 0);
    out.vertical_grad_psi_H1_sq = gradient_norm_sq(derivative(state.psi, 3), 1);
    if (detail == LedgerDetail::energy) return out;

    const SubstitutedForm form = substituted_form(state);
    out.rhs_terms = weighted_terms(rhs_inner(state, form));
    physical_diagnostics(state, out);

    SpectralField p = form.forcing.nonlocal_potential;
    p.axpy(-2.0, derivative(state.psi, 3));
    p[0] = Complex{};
    out.grad_p_H1 = std::sqrt(gradient_norm_sq(p, 1));
    return out;
}

double energy_identity_residual(std::span<const EnergyLedger> window) {
    if (window.size() != 3 && window.size() != 5) {
        throw std::invalid_argument("energy_identity_residual: window must hold 3 or 5 records");
    }
    const double h = window[1].t - window[0].t;
    const double span = window.back().t - window.front().t;
    if (!(h > 0.0)) throw std::invalid_argument("energy_identity_residual: times must increase");
    for (std::size_t i = 1; i < window.size(); ++i) {
        const double hi = window[i].t - window[i - 1].t;
        if (std::abs(hi - h) > 1e-9 * span) {
            throw std::invalid_argument("energy_identity_residual: non-uniform sample spacing");
        }
    }
    double dEdt;
    const EnergyLedger* centre;
    if (window.size() == 3) {
        dEdt = (window[2].E_mod - window[0].E_mod) / (2.0 * h);
        centre = &window[1];
    } else {
        dEdt = (window[0].E_mod - 8.0 * window[1].E_mod + 8.0 * window[3].E_mod - window[4].E_mod) / (12.0 * h);
        centre = &window[2];
    }
    const EnergyLedger& c = *centre;
    if (std::isnan(c.rhs_sum())) return kNaN;
    double scale = std::max({1e-30, std::abs(dEdt), c.D_visc, 0.25 * c.D_v3, 0.25 * c.D_psi_h});
    for (double r : c.rhs_terms) scale = std::max(scale, std::abs(r));
    return std::abs(dEdt + c.dissipation() - c.rhs_sum()) / scale;
}

SubidentityResiduals energy_subidentities(const FlowState& s) {
    const Tendency tend = compute_rhs(s);
    const SubstitutedForm form = substituted_form(s);
    const RhsInner r = rhs_inner(s, form);
    const SpectralNorms n = spectral_norms(s);
    const SpectralField lap_psi = laplacian(s.psi);
    const SpectralField lap_dpsi = laplacian(tend.dpsi);

    // d/dt 1/2 ||v||^2_{H^2} and d/dt 1/2 ||grad psi||^2_{H^2}
    const double dt_v = vector_inner(tend.dv, s.v, 2);
    const double dt_grad_psi = vector_inner(gradient(tend.dpsi), gradient(s.psi), 2);
    const double lhs14 = dt_v + dt_grad_psi + n.D_visc;
    const double rhs14 = -r.adv_v_H2 + r.adv_psi_H2 - r.stress_v_H2;

    // d/dt 1/2 ||lap psi||^2_{H^1} and d/dt (v3 | lap psi)_{H^1}
    const double dt_lap = sobolev_inner(lap_dpsi, lap_psi, 1);
    const double dt_cross = sobolev_inner(tend.dv[2], lap_psi, 1) + sobolev_inner(s.v[2], lap_dpsi, 1);
    const double lhs18 = dt_lap + dt_cross + n.D_psi_h - n.D_v3;
    const double rhs18 = -r.adv_v3_H1 + r.fv_H1 + r.grad_mix_H1 - r.lap_adv_H1;

    SubidentityResiduals out;
    out.h2_balance = normalized(lhs14, rhs14, {dt_v, dt_grad_psi, n.D_visc, r.adv_v_H2, r.adv_psi_H2, r.stress_v_H2});
    out.cross_balance = normalized(lhs18, rhs18, {dt_lap, dt_cross, n.D_psi_h, n.D_v3, r.adv_v3_H1, r.fv_H1,
                                                  r.grad_mix_H1, r.lap_adv_H1});
    out.energy_identity =
        normalized(lhs14 + 0.25 * lhs18, rhs14 + 0.25 * rhs18,
                   {dt_v, dt_grad_psi, n.D_visc, 0.25 * dt_lap, 0.25 * dt_cross, 0.25 * n.D_psi_h, 0.25 * n.D_v3,
                    r.adv_v_H2, r.adv_psi_H2, r.stress_v_H2, 0.25 * r.adv_v3_H1, 0.25 * r.fv_H1,
                    0.25 * r.grad_mix_H1, 0.25 * r.lap_adv_H1});
    return out;
}

std::vector<double> bt_series(std::span<const EnergyLedger> series) {
    if (series.empty()) throw std::invalid_argument("bt_functional: empty series");
    std::vector<double> out;
    out.reserve(series.size());
    double sup = 0.0;
    double integral = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        sup = std::max(sup, s.v_H2_sq + s.grad_psi_H2_sq);
        if (i > 0) {
            const auto& p = series[i - 1];
            integral += 0.5 * (s.t - p.t) * (s.D_visc + p.D_visc + s.D_psi_h + p.D_psi_h);
        }
        out.push_back(std::sqrt(sup + integral));
    }
    return out;
}

double bt_functional(std::span<const EnergyLedger> series) { return bt_series(series).back(); }

namespace {

double sup_of(std::span<const EnergyLedger> series, double EnergyLedger::*field) {
    double sup = 0.0;
    for (const auto& s : series) sup = std::max(sup, s.*field);
    return sup;
}

void fill_ratio(double lhs, double rhs, double& ratio, bool& anomaly) {
    if (rhs > 0.0) {
        ratio = lhs / rhs;
    } else if (lhs == 0.0) {
        ratio = 0.0;
    } else {
        ratio = std::numeric_limits<double>::infinity();
        anomaly = true;
    }
}

}  // namespace

InequalityRatios interpolation_ratios(std::span<const EnergyLedger> series) {
    if (series.empty()) throw std::invalid_argument("interpolation_ratios: empty series");
    InequalityRatios out;
    const double horiz_L2 = time_integral(series, [](const EnergyLedger& s) { return s.grad_h_grad_psi_L2_sq; });
    const double horiz_H1 = time_integral(series, [](const EnergyLedger& s) { return s.D_psi_h; });
    const double sup_H1 = sup_of(series, &EnergyLedger::grad_psi_H1_sq);
    const double sup_H2 = sup_of(series, &EnergyLedger::grad_psi_H2_sq);

    out.lhs[0] = std::pow(time_integral(series, [](const EnergyLedger& s) { return s.grad_psi_L4_4; }), 0.25);
    out.lhs[1] = std::pow(time_integral(series, [](const EnergyLedger& s) { return s.hess_psi_L4_4; }), 0.25);
    out.lhs[2] = std::pow(time_integral(series, [](const EnergyLedger& s) { return std::pow(s.linf_grad_psi, 4); }),
                          0.25);
    out.rhs[0] = std::pow(horiz_L2, 0.25) * std::pow(sup_H1, 0.25);
    out.rhs[1] = std::pow(horiz_H1, 0.25) * std::pow(sup_H2, 0.25);
    out.rhs[2] = out.rhs[1];
    for (int i = 0; i < 3; ++i) fill_ratio(out.lhs[i], out.rhs[i], out.ratios[i], out.anomaly);
    return out;
}

ProbeReport bound_probe(std::span<const EnergyLedger> series) {
    if (series.empty()) throw std::invalid_argument("bound_probe: empty series");
    ProbeReport out;
    auto probe = [&](int i) {
        return std::abs(time_integral(series, [i](const EnergyLedger& s) { return s.probe_integrands[i]; }));
    };
    out.lhs[0] = probe(0) + probe(1) + probe(2);
    out.lhs[1] = probe(3);
    out.lhs[2] = probe(4);

    const double sup_grad_psi = std::sqrt(sup_of(series, &EnergyLedger::grad_psi_H2_sq));
    const double horiz = std::sqrt(time_integral(series, [](const EnergyLedger& s) { return s.D_psi_h; }));
    const double visc = std::sqrt(time_integral(series, [](const EnergyLedger& s) { return s.D_visc; }));
    const double bt = bt_functional(series);
    out.rhs[0] = sup_grad_psi * horiz * visc * (1.0 + sup_grad_psi);
    out.rhs[1] = std::pow(bt, 3) * (1.0 + bt * bt);
    out.rhs[2] = std::pow(bt, 4) * (1.0 + bt);
    for (int i = 0; i < 3; ++i) fill_ratio(out.lhs[i], out.rhs[i], out.ratios[i], out.anomaly);
    return out;
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::blow_up_nonfinite: return "blow_up_nonfinite";
        case Termination::blow_up_growth: return "blow_up_growth";
    }
    return "unknown";
}

RunReport summarize(std::span<const EnergyLedger> series, double b0, double energy0_sq) {
    if (series.empty()) throw std::invalid_argument("summarize: empty series");
    RunReport r;
    r.B0 = b0;
    r.B_T = bt_functional(series);
    r.t_final = series.back().t;

    const double e0 = series.front().E_mod;
    double sup_e = 0.0;
    for (const auto& s : series) sup_e = std::max(sup_e, s.E_mod);
    r.sup_energy_ratio = e0 > 0.0 ? sup_e / e0 : 0.0;

    double res_max = 0.0, res_sq = 0.0;
    std::size_t res_n = 0;
    for (const auto& s : series) {
        if (std::isnan(s.residual)) continue;
        res_max = std::max(res_max, s.residual);
        res_sq += s.residual * s.residual;
        ++res_n;
    }
    if (res_n > 0) {
        r.identity_residual_max = res_max;
        r.identity_residual_rms = std::sqrt(res_sq / static_cast<double>(res_n));
    }

    const bool full = !std::isnan(series.front().grad_psi_L4_4);
    if (full) {
        r.interpolation = interpolation_ratios(series);
        r.probe = bound_probe(series);
        r.sup_grad_p_H1 = 0.0;
        for (const auto& s : series) r.sup_grad_p_H1 = std::max(r.sup_grad_p_H1, s.grad_p_H1);
        r.pressure_ratio = b0 > 0.0 ? r.sup_grad_p_H1 / b0 : (r.sup_grad_p_H1 == 0.0 ? 0.0 : kNaN);
    } else {
        r.interpolation.ratios = {kNaN, kNaN, kNaN};
        r.probe.ratios = {kNaN, kNaN, kNaN};
    }

    const double growth = std::pow(r.B_T, 3) * std::pow(1.0 + r.B_T, 2);
    r.a_priori_quantity = growth > 0.0 ? (r.B_T * r.B_T - energy0_sq) / growth : 0.0;

    auto horiz = [](const EnergyLedger& s) { return s.D_psi_h; };
    r.horizontal_dissipation_integral = time_integral(series, horiz);
    r.vertical_gradient_integral =
        time_integral(series, [](const EnergyLedger& s) { return s.vertical_grad_psi_H1_sq; });
    const double t0 = series.front().t;
    const double t_tail = t0 + 0.75 * (series.back().t - t0);
    std::size_t cut = 0;
    while (cut + 1 < series.size() && series[cut + 1].t <= t_tail) ++cut;
    const double head = time_integral(series.first(cut + 1), horiz);
    r.horizontal_dissipation_tail_fraction = r.horizontal_dissipation_integral > 0.0
                                                 ? (r.horizontal_dissipation_integral - head) /
                                                       r.horizontal_dissipation_integral
                                                 : 0.0;
    return r;
}

}  // namespace anisoflow
