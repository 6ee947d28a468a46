#include "anisoflow/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace anisoflow {

const std::vector<std::string>& ledger_csv_columns() {
    static const std::vector<std::string> columns{
        "t",     "E_mod", "D_visc", "D_v3",  "D_psi_h",    "rhs_1",   "rhs_2",          "rhs_3",
        "rhs_4", "rhs_5", "rhs_6",  "rhs_7", "cross_term", "v_H2_sq", "grad_psi_H2_sq", "lap_psi_H1_sq",
        "linf_grad_psi", "residual"};
    return columns;
}

std::string ledger_csv_row(const EnergyLedger& l) {
    std::vector<double> values{l.t, l.E_mod, l.D_visc, l.D_v3, l.D_psi_h};
    values.insert(values.end(), l.rhs_terms.begin(), l.rhs_terms.end());
    values.insert(values.end(), {l.cross_term, l.v_H2_sq, l.grad_psi_H2_sq, l.lap_psi_H1_sq, l.linf_grad_psi,
                                 l.residual});
    std::string row;
    char buf[40];
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        row += buf;
    }
    return row;
}

CsvLedgerSink::CsvLedgerSink(const std::string& path) : file_(std::fopen(path.c_str(), "w")) {
    if (!file_) throw std::runtime_error("cannot open " + path);
    const auto& cols = ledger_csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) std::fprintf(file_, i ? ",%s" : "%s", cols[i].c_str());
    std::fputc('\n', file_);
}

CsvLedgerSink::~CsvLedgerSink() {
    if (file_) std::fclose(file_);
}

void CsvLedgerSink::on_ledger(const EnergyLedger& ledger) {
    std::fprintf(file_, "%s\n", ledger_csv_row(ledger).c_str());
}

void CsvLedgerSink::on_finish(const RunReport&) { std::fflush(file_); }

namespace {

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

template <std::size_t N>
nlohmann::json numbers(const std::array<double, N>& xs) {
    nlohmann::json out = nlohmann::json::array();
    for (double x : xs) out.push_back(number(x));
    return out;
}

}  // namespace

nlohmann::json to_json(const RunReport& r) {
    nlohmann::json verdict;
    if (r.bounded()) {
        verdict = {{"kind", "bounded"}};
    } else {
        verdict = {{"kind", "blow_up"}, {"cause", to_string(r.termination)}, {"t", number(r.blow_up_time)}};
    }
    return {
        {"B0", number(r.B0)},
        {"B_T", number(r.B_T)},
        {"B_T_over_B0", r.B0 > 0.0 ? number(r.B_T / r.B0) : nlohmann::json(nullptr)},
        {"sup_energy_ratio", number(r.sup_energy_ratio)},
        {"identity_residual_max", number(r.identity_residual_max)},
        {"identity_residual_rms", number(r.identity_residual_rms)},
        {"interp_ratios", numbers(r.interpolation.ratios)},
        {"interp_anomaly", r.interpolation.anomaly},
        {"bound_probe_ratios", numbers(r.probe.ratios)},
        {"bound_probe_anomaly", r.probe.anomaly},
        {"a_priori_quantity", number(r.a_priori_quantity)},
        {"sup_grad_p_H1", number(r.sup_grad_p_H1)},
        {"pressure_ratio", number(r.pressure_ratio)},
        {"horizontal_dissipation_integral", number(r.horizontal_dissipation_integral)},
        {"horizontal_dissipation_tail_fraction", number(r.horizontal_dissipation_tail_fraction)},
        {"vertical_gradient_integral", number(r.vertical_gradient_integral)},
        {"verdict", verdict},
        {"steps", r.steps},
        {"t_final", number(r.t_final)},
    };
}

nlohmann::json to_json(const StepperConfig& c) {
    return {{"scheme", to_string(c.scheme)},
            {"dt_mode", c.dt_mode == DtMode::fixed ? "fixed" : "cfl"},
            {"dt", c.dt},
            {"cfl_safety", c.cfl_safety},
            {"dt_max", c.dt_max},
            {"t_end", c.t_end},
            {"dealias_every_stage", c.dealias_every_stage}};
}

void write_json(const std::string& path, const nlohmann::json& value) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << value.dump(2) << '\n';
}

}  // namespace anisoflow
