#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

#include "anisoflow/checkpoint.hpp"
#include "anisoflow/diagnostics.hpp"
#include "anisoflow/harness.hpp"
#include "anisoflow/integrator.hpp"
#include "anisoflow/io.hpp"
#include "anisoflow/model.hpp"
#include "anisoflow/spectral.hpp"
#include "anisoflow/verify.hpp"

namespace py = pybind11;
using namespace anisoflow;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

struct Grid {
    GridPtr ptr;
};

std::vector<py::ssize_t> half_shape(const SpectralGrid& g) {
    return {g.dims()[0], g.dims()[1], g.n3_half()};
}

std::vector<py::ssize_t> full_shape(const SpectralGrid& g) { return {g.dims()[0], g.dims()[1], g.dims()[2]}; }

ComplexArray to_numpy(const SpectralField& f) {
    ComplexArray out(half_shape(*f.grid()));
    std::memcpy(out.mutable_data(), f.coeffs().data(), f.size() * sizeof(Complex));
    return out;
}

SpectralField from_numpy(const GridPtr& g, const ComplexArray& a) {
    SpectralField f(g);
    if (a.ndim() != 3 || a.shape(0) != g->dims()[0] || a.shape(1) != g->dims()[1] || a.shape(2) != g->n3_half()) {
        throw std::invalid_argument("coefficient array must have shape (n1, n2, n3 // 2 + 1)");
    }
    std::memcpy(f.coeffs().data(), a.data(), f.size() * sizeof(Complex));
    return f;
}

py::object json_to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict ledger_columns(const std::vector<EnergyLedger>& ledger) {
    const auto n = static_cast<py::ssize_t>(ledger.size());
    auto column = [&](auto get) {
        py::array_t<double> a(n);
        auto* p = a.mutable_data();
        for (py::ssize_t i = 0; i < n; ++i) p[i] = get(ledger[i]);
        return a;
    };
    py::dict d;
    d["t"] = column([](const EnergyLedger& l) { return l.t; });
    d["E_mod"] = column([](const EnergyLedger& l) { return l.E_mod; });
    d["D_visc"] = column([](const EnergyLedger& l) { return l.D_visc; });
    d["D_v3"] = column([](const EnergyLedger& l) { return l.D_v3; });
    d["D_psi_h"] = column([](const EnergyLedger& l) { return l.D_psi_h; });
    py::array_t<double> rhs({n, py::ssize_t{7}});
    for (py::ssize_t i = 0; i < n; ++i) {
        for (int k = 0; k < 7; ++k) rhs.mutable_at(i, k) = ledger[i].rhs_terms[k];
    }
    d["rhs_terms"] = rhs;
    d["cross_term"] = column([](const EnergyLedger& l) { return l.cross_term; });
    d["v_H2_sq"] = column([](const EnergyLedger& l) { return l.v_H2_sq; });
    d["grad_psi_H2_sq"] = column([](const EnergyLedger& l) { return l.grad_psi_H2_sq; });
    d["lap_psi_H1_sq"] = column([](const EnergyLedger& l) { return l.lap_psi_H1_sq; });
    d["linf_grad_psi"] = column([](const EnergyLedger& l) { return l.linf_grad_psi; });
    d["grad_p_H1"] = column([](const EnergyLedger& l) { return l.grad_p_H1; });
    d["residual"] = column([](const EnergyLedger& l) { return l.residual; });
    return d;
}

py::tuple tendency_to_python(const Tendency& t) {
    return py::make_tuple(to_numpy(t.dpsi), py::make_tuple(to_numpy(t.dv[0]), to_numpy(t.dv[1]), to_numpy(t.dv[2])));
}

LedgerDetail parse_detail(const std::string& s) {
    if (s == "full") return LedgerDetail::full;
    if (s == "energy") return LedgerDetail::energy;
    throw std::invalid_argument("detail must be 'full' or 'energy'");
}

}  // namespace

PYBIND11_MODULE(_anisoflow, m) {
    m.doc() = "Pseudo-spectral solver and diagnostics for the (psi, v) perturbation system.";

    py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_RuntimeError);

    py::class_<Grid>(m, "Grid")
        .def(py::init([](int n1, std::optional<int> n2, std::optional<int> n3, double box_length) {
                 return Grid{SpectralGrid::create(n1, n2.value_or(n1), n3.value_or(n2.value_or(n1)), box_length)};
             }),
             py::arg("n1"), py::arg("n2") = py::none(), py::arg("n3") = py::none(),
             py::arg("box_length") = 6.283185307179586)
        .def_property_readonly("shape", [](const Grid& g) { return g.ptr->dims(); })
        .def_property_readonly("spectral_shape", [](const Grid& g) { return half_shape(*g.ptr); })
        .def_property_readonly("box_length", [](const Grid& g) { return g.ptr->box_length(); })
        .def_property_readonly("dealias_limit", [](const Grid& g) { return g.ptr->dealias_limit(); })
        .def("__repr__", [](const Grid& g) {
            const auto d = g.ptr->dims();
            return "Grid(" + std::to_string(d[0]) + ", " + std::to_string(d[1]) + ", " + std::to_string(d[2]) + ")";
        });

    m.def(
        "forward",
        [](const Grid& g, const RealArray& samples) {
            if (samples.ndim() != 3 || samples.shape(0) != g.ptr->dims()[0] || samples.shape(1) != g.ptr->dims()[1] ||
                samples.shape(2) != g.ptr->dims()[2]) {
                throw std::invalid_argument("samples must have shape (n1, n2, n3)");
            }
            return to_numpy(forward_transform(g.ptr, {samples.data(), static_cast<std::size_t>(samples.size())}));
        },
        py::arg("grid"), py::arg("samples"), "Normalized forward transform onto the half lattice.");
    m.def(
        "inverse",
        [](const Grid& g, const ComplexArray& coeffs) {
            const RealField f = inverse_transform(from_numpy(g.ptr, coeffs));
            RealArray out(full_shape(*g.ptr));
            std::memcpy(out.mutable_data(), f.values().data(), f.size() * sizeof(double));
            return out;
        },
        py::arg("grid"), py::arg("coeffs"));

    py::class_<FlowState>(m, "State")
        .def(py::init([](const Grid& g, const ComplexArray& psi, const std::array<ComplexArray, 3>& v, double t) {
                 FlowState s{from_numpy(g.ptr, psi),
                             {from_numpy(g.ptr, v[0]), from_numpy(g.ptr, v[1]), from_numpy(g.ptr, v[2])},
                             t};
                 return s;
             }),
             py::arg("grid"), py::arg("psi"), py::arg("v"), py::arg("t") = 0.0)
        .def_static("zero", [](const Grid& g) { return FlowState::zero(g.ptr); }, py::arg("grid"))
        .def_property_readonly("grid", [](const FlowState& s) { return Grid{s.grid()}; })
        .def_property_readonly("psi", [](const FlowState& s) { return to_numpy(s.psi); })
        .def_property_readonly("v",
                               [](const FlowState& s) {
                                   return py::make_tuple(to_numpy(s.v[0]), to_numpy(s.v[1]), to_numpy(s.v[2]));
                               })
        .def_readwrite("t", &FlowState::t)
        .def("max_divergence_defect", [](const FlowState& s) { return max_divergence_defect(s.v); })
        .def("max_hermitian_defect", [](const FlowState& s) { return max_hermitian_defect(s); })
        .def("max_mean_mode", [](const FlowState& s) { return max_mean_mode(s); });

    m.def(
        "generate_initial",
        [](const Grid& g, const std::string& kind, double amplitude, std::uint64_t seed, int k_max, double slope,
           double psi_fraction, std::array<int, 3> mode, const std::string& checkpoint) {
            InitSpec spec;
            spec.kind = parse_init_kind(kind);
            spec.amplitude_B0 = amplitude;
            spec.seed = seed;
            spec.k_max = k_max;
            spec.spectrum_slope = slope;
            spec.psi_fraction = psi_fraction;
            spec.mode = mode;
            spec.checkpoint_path = checkpoint;
            return generate_initial(g.ptr, spec);
        },
        py::arg("grid"), py::arg("kind") = "random_band", py::arg("amplitude") = 0.05, py::arg("seed") = 1,
        py::arg("k_max") = 3, py::arg("slope") = -2.0, py::arg("psi_fraction") = 0.5,
        py::arg("mode") = std::array<int, 3>{1, 0, 0}, py::arg("checkpoint") = "");

    m.def(
        "compute_rhs", [](const FlowState& s) { return tendency_to_python(compute_rhs(s)); }, py::arg("state"),
        "Tendency (dpsi, (dv1, dv2, dv3)) of the projected formulation.");
    m.def(
        "compute_rhs_explicit", [](const FlowState& s) { return tendency_to_python(compute_rhs_explicit(s)); },
        py::arg("state"));
    m.def(
        "pressure", [](const FlowState& s) { return to_numpy(pressure_solve(s)); }, py::arg("state"));

    m.def(
        "step",
        [](const FlowState& s, double dt, const std::string& scheme) {
            StepperConfig c;
            c.scheme = parse_scheme(scheme);
            return step(s, dt, c);
        },
        py::arg("state"), py::arg("dt"), py::arg("scheme") = "IFRK4");

    m.def(
        "run",
        [](const FlowState& s, double t_end, double dt, const std::string& scheme, bool cfl, double cfl_safety,
           std::size_t sample_every, const std::string& detail) {
            StepperConfig c;
            c.scheme = parse_scheme(scheme);
            c.dt_mode = cfl ? DtMode::cfl : DtMode::fixed;
            c.dt = dt;
            c.cfl_safety = cfl_safety;
            c.t_end = t_end;
            RunOptions o;
            o.detail = parse_detail(detail);
            o.sample_every = sample_every;
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run(s, c, o);
            }
            return py::make_tuple(r.final_state, json_to_python(to_json(r.report)), ledger_columns(r.ledger));
        },
        py::arg("state"), py::arg("t_end"), py::arg("dt") = 1e-3, py::arg("scheme") = "IFRK4", py::arg("cfl") = false,
        py::arg("cfl_safety") = 0.5, py::arg("sample_every") = 1, py::arg("detail") = "full",
        "Returns (final_state, report, ledger).");

    m.def(
        "ledger", [](const FlowState& s) { return ledger_columns({compute_ledger(s)}); }, py::arg("state"));
    m.def("modified_energy", &modified_energy, py::arg("state"));
    m.def("b0", &b0_functional, py::arg("state"));
    m.def(
        "energy_subidentities",
        [](const FlowState& s) {
            const SubidentityResiduals r = energy_subidentities(s);
            py::dict d;
            d["h2_balance"] = r.h2_balance;
            d["cross_balance"] = r.cross_balance;
            d["energy_identity"] = r.energy_identity;
            return d;
        },
        py::arg("state"));
    m.def(
        "pressure_report",
        [](const FlowState& s) {
            const PressureSummary p = pressure_report(s);
            py::dict d;
            d["grad_p_H1"] = p.grad_p_H1;
            d["B0"] = p.B0;
            d["ratio"] = p.ratio;
            return d;
        },
        py::arg("state"));

    m.def(
        "write_checkpoint",
        [](const std::string& path, const FlowState& s, const std::string& scheme) {
            write_checkpoint(path, s, parse_scheme(scheme));
        },
        py::arg("path"), py::arg("state"), py::arg("scheme") = "IFRK4");
    m.def(
        "read_checkpoint",
        [](const std::string& path) {
            Checkpoint c = read_checkpoint(path);
            return py::make_tuple(std::move(c.state), std::string(to_string(c.scheme)));
        },
        py::arg("path"), "Returns (state, scheme).");

    m.def(
        "verify",
        [](int n, std::uint64_t seed, int states, const std::string& scratch) {
            std::vector<CheckResult> results;
            {
                py::gil_scoped_release release;
                results = verify_suite(SpectralGrid::cube(n), seed, states, scratch);
            }
            py::list out;
            for (const auto& r : results) {
                py::dict d;
                d["name"] = r.name;
                d["value"] = r.value;
                d["tolerance"] = r.tolerance;
                d["pass"] = r.pass;
                out.append(d);
            }
            return out;
        },
        py::arg("n"), py::arg("seed") = 1, py::arg("states") = 3, py::arg("scratch"));
}
