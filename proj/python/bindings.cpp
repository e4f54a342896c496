#include "beamstab/bounds.hpp"
#include "beamstab/commands.hpp"
#include "beamstab/diagnostics.hpp"
#include "beamstab/errors.hpp"
#include "beamstab/problem.hpp"
#include "beamstab/stepper.hpp"
#include "beamstab/verification.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace beamstab;

namespace {

py::array_t<double> array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

TimeGrid grid_for(const BeamProblem& p, std::size_t nodes, std::optional<double> dt, std::optional<double> ratio) {
    RunConfig c;
    c.nodes = nodes;
    c.dt = dt;
    c.ratio = ratio;
    check_resolution(c);
    return time_grid(c, p);
}

// Nodal field over all levels, clamped node included; rotation = false gives u.
py::array_t<double> nodal_field(const SolutionTrace& trace, bool rotation) {
    const std::size_t levels = trace.grid.size();
    const std::size_t nodes = trace.mesh().node_count();
    const DofMap map = trace.system->dof_map();
    py::array_t<double> out({levels, nodes});
    auto a = out.mutable_unchecked<2>();
    for (std::size_t j = 0; j < levels; ++j) {
        for (std::size_t i = 0; i < nodes; ++i) {
            const auto dof = rotation ? map.rotation(i) : map.displacement(i);
            a(j, i) = dof ? trace.dofs[j][*dof] : 0.0;
        }
    }
    return out;
}

py::dict energy_dict(const EnergyTrace& e) {
    py::dict d;
    d["t"] = array(e.times);
    d["E"] = array(e.E);
    d["J"] = array(e.J);
    d["L"] = e.L.empty() ? py::object(py::none()) : py::object(array(e.L));
    d["j_mu"] = array(e.j_mu);
    d["j_a"] = array(e.j_a);
    d["j_v"] = array(e.j_v);
    d["residual"] = array(e.residual);
    d["E0"] = e.E0;
    d["J0"] = e.J0;
    d["lambda"] = e.lambda ? py::object(py::float_(*e.lambda)) : py::object(py::none());
    d["forced"] = e.forced;
    d["mode"] = std::string(to_string(e.mode));
    return d;
}

std::string bound_text(const std::string& problem_text, const SolutionTrace* trace, const std::string& mode,
                       std::optional<double> lambda) {
    const BeamProblem p = parse_problem(problem_text);
    if (trace == nullptr) return to_json(decay_bound(p, nullptr, lambda)).dump();
    const EnergyTrace e = energy(*trace, curvature_mode_from_string(mode));
    const DecayBound b = decay_bound(p, &e, lambda);
    nlohmann::json j = to_json(b);
    j["envelope"] = to_json(verify_envelopes(e, b));
    j["E0"] = e.E0;
    return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Damped Euler-Bernoulli beam: Hermite FEM, BDF2 stepping, energy diagnostics and decay bounds";

    auto base = py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<NoAdmissiblePenalty>(m, "NoAdmissiblePenalty", PyExc_ValueError);
    (void)base;

    m.def("preset_names", &preset_names);
    m.def("preset_json", [](const std::string& name) { return serialize(preset(name)); }, py::arg("name"));
    m.def("normalize", [](const std::string& text) { return serialize(parse_problem(text)); }, py::arg("text"));
    m.def(
        "validate",
        [](const std::string& text) {
            std::vector<std::tuple<std::string, std::string, std::string>> rows;
            for (const Violation& v : validate(parse_problem(text)).violations) {
                rows.emplace_back(v.severity == Severity::error ? "error" : "warning", v.clause, v.message);
            }
            return rows;
        },
        py::arg("text"));

    py::class_<SolutionTrace>(m, "Trace")
        .def_property_readonly("times",
                               [](const SolutionTrace& t) {
                                   std::vector<double> v(t.grid.size());
                                   for (std::size_t j = 0; j < v.size(); ++j) v[j] = t.grid.time(j);
                                   return array(v);
                               })
        .def_property_readonly("nodes",
                               [](const SolutionTrace& t) {
                                   const auto n = t.mesh().nodes();
                                   return array(std::vector<double>(n.begin(), n.end()));
                               })
        .def_property_readonly("dt", [](const SolutionTrace& t) { return t.grid.step(); })
        .def_property_readonly("displacement", [](const SolutionTrace& t) { return nodal_field(t, false); })
        .def_property_readonly("slope", [](const SolutionTrace& t) { return nodal_field(t, true); })
        .def(
            "sample",
            [](const SolutionTrace& t, double x, double time) {
                const SpaceTimeSample s = interpolate(t, x, time);
                return py::dict(py::arg("u") = s.u, py::arg("ux") = s.ux, py::arg("uxx") = s.uxx, py::arg("ut") = s.ut);
            },
            py::arg("x"), py::arg("t"));

    m.def(
        "simulate",
        [](const std::string& text, std::size_t nodes, std::optional<double> dt, std::optional<double> ratio) {
            const BeamProblem p = parse_problem(text);
            const TimeGrid grid = grid_for(p, nodes, dt, ratio);
            py::gil_scoped_release release;
            return run(p, Mesh(p.length, nodes), grid);
        },
        py::arg("text"), py::arg("nodes") = 41, py::arg("dt") = py::none(), py::arg("ratio") = py::none());

    m.def(
        "energy",
        [](const SolutionTrace& trace, const std::string& mode) {
            return energy_dict(energy(trace, curvature_mode_from_string(mode)));
        },
        py::arg("trace"), py::arg("mode") = "paper");

    m.def(
        "beta_constants",
        [](const std::string& text) {
            const BetaConstants b = beta_constants(parse_problem(text));
            return py::make_tuple(b.beta0, b.beta1, std::string(to_string(b.regime)));
        },
        py::arg("text"));
    m.def(
        "decay_estimate",
        [](double beta0, double beta1, double lambda) {
            const DecayConstants c = decay_estimate(beta0, beta1, lambda);
            return py::make_tuple(c.M_d, c.sigma);
        },
        py::arg("beta0"), py::arg("beta1"), py::arg("lam"));
    m.def(
        "decay_bound",
        [](const std::string& text, const SolutionTrace* trace, const std::string& mode, std::optional<double> lambda) {
            return bound_text(text, trace, mode, lambda);
        },
        py::arg("text"), py::arg("trace") = nullptr, py::arg("mode") = "paper", py::arg("lam") = py::none());

    m.def(
        "convergence",
        [](const std::string& text, const std::string& study, std::size_t nodes, double dt, double ratio,
           std::size_t levels, const std::string& mode) {
            StudySettings s;
            s.study = study_from_string(study);
            s.nodes = nodes;
            s.dt = dt;
            s.ratio = ratio;
            s.levels = levels;
            s.mode = curvature_mode_from_string(mode);
            const BeamProblem p = parse_problem(text);
            std::vector<ConvergenceRow> rows;
            {
                py::gil_scoped_release release;
                rows = convergence_study(p, s);
            }
            py::list out;
            for (const ConvergenceRow& r : rows) {
                out.append(py::dict(py::arg("nodes") = r.nodes, py::arg("levels") = r.levels, py::arg("dx") = r.dx,
                                    py::arg("dt") = r.dt, py::arg("error") = r.error,
                                    py::arg("relative_error") = r.relative_error, py::arg("order") = r.order));
            }
            return out;
        },
        py::arg("text"), py::arg("study"), py::arg("nodes") = 41, py::arg("dt") = 0.01, py::arg("ratio") = 40.0,
        py::arg("levels") = 4, py::arg("mode") = "paper");

    m.def(
        "sweep",
        [](const std::string& text, const std::string& parameter, const std::vector<double>& values, std::size_t nodes,
           std::optional<double> dt, std::optional<double> ratio, const std::string& mode) {
            RunConfig c;
            c.nodes = nodes;
            c.dt = dt;
            c.ratio = ratio;
            c.mode = curvature_mode_from_string(mode);
            check_resolution(c);
            const BeamProblem p = parse_problem(text);
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = sweep(c, p, parameter, values);
            }
            py::list out;
            for (const SweepRow& r : rows) {
                out.append(py::dict(py::arg("value") = r.value, py::arg("regime") = r.regime,
                                    py::arg("beta0") = r.beta0, py::arg("beta1") = r.beta1,
                                    py::arg("lambda_max") = r.lambda_max, py::arg("M_d") = r.M_d,
                                    py::arg("sigma") = r.sigma, py::arg("E0") = r.E0,
                                    py::arg("E_T_over_E0") = r.E_final_ratio, py::arg("j_mu_T") = r.j_mu,
                                    py::arg("j_a_T") = r.j_a, py::arg("j_v_T") = r.j_v));
            }
            return out;
        },
        py::arg("text"), py::arg("parameter"), py::arg("values"), py::arg("nodes") = 41, py::arg("dt") = py::none(),
        py::arg("ratio") = py::none(), py::arg("mode") = "paper");
}
