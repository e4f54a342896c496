#include "beamstab/verification.hpp"

#include "beamstab/errors.hpp"
#include "beamstab/parallel.hpp"
#include "beamstab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace beamstab {

ExactSolution ne1_exact_solution() {
    return {
        [](double x, double t) { return x * x * std::exp(-2.0 * t); },
        [](double x, double t) { return 2.0 * x * std::exp(-2.0 * t); },
        [](double, double t) { return 2.0 * std::exp(-2.0 * t); },
        [](double x, double t) { return -2.0 * x * x * std::exp(-2.0 * t); },
    };
}

std::optional<ExactSolution> exact_solution_for(const BeamProblem& problem) {
    BeamProblem reference = preset("test_NE1");
    reference.final_time = problem.final_time;
    if (problem == reference) return ne1_exact_solution();
    return std::nullopt;
}

double max_nodal_error(const SolutionTrace& trace, const ExactSolution& exact) {
    const Mesh& mesh = trace.mesh();
    const DofMap map{mesh.node_count()};
    double worst = 0.0;
    for (std::size_t j = 0; j < trace.grid.size(); ++j) {
        const double t = trace.grid.time(j);
        for (std::size_t i = 1; i < mesh.node_count(); ++i) {
            const double e = trace.dofs[j][*map.displacement(i)] - exact.u(mesh.node(i), t);
            worst = std::max(worst, std::abs(e));
        }
    }
    return worst;
}

ErrorTable solution_errors(const SolutionTrace& trace, const ExactSolution& exact, CurvatureMode mode) {
    const Mesh& mesh = trace.mesh();
    const TimeGrid& grid = trace.grid;
    const QuadratureRule& rule = gauss_legendre(trace.system->quad_points());
    const double h = mesh.spacing();
    ErrorTable table;
    table.nodal_u = max_nodal_error(trace, exact);

    struct Accumulator {
        ErrorNorm& norm;
        double sum = 0.0;
    };
    Accumulator acc[4] = {{table.u}, {table.ux}, {table.ut}, {table.uxx}};

    const std::size_t first = 1;
    const std::size_t last = grid.size() - 2;
    for (std::size_t j = first; j <= last; ++j) {
        const double t = grid.time(j);
        const std::vector<double> velocity = time_derivative(trace, j);
        const auto curvature = curvature_field(trace, j, mode);
        const auto errors_at = [&](double x) {
            const FieldValue f = evaluate_solution(mesh, trace.dofs[j], x);
            const double ut = evaluate_solution(mesh, velocity, x).u;
            return std::array<double, 4>{f.u - exact.u(x, t), f.ux - exact.ux(x, t), ut - exact.ut(x, t),
                                         curvature(x) - exact.uxx(x, t)};
        };
        const double time_weight = (j == first || j == last) ? 0.5 * grid.step() : grid.step();
        for (std::size_t i = 0; i < mesh.node_count(); ++i) {
            const auto e = errors_at(mesh.node(i));
            for (std::size_t k = 0; k < 4; ++k) acc[k].norm.max = std::max(acc[k].norm.max, std::abs(e[k]));
        }
        for (std::size_t el = 0; el < mesh.element_count(); ++el) {
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const auto e = errors_at(mesh.node(el) + rule.points[q] * h);
                for (std::size_t k = 0; k < 4; ++k) {
                    acc[k].norm.max = std::max(acc[k].norm.max, std::abs(e[k]));
                    acc[k].sum += time_weight * rule.weights[q] * h * e[k] * e[k];
                }
            }
        }
    }
    for (auto& a : acc) a.norm.l2 = std::sqrt(a.sum);
    return table;
}

std::string_view to_string(Study study) {
    switch (study) {
    case Study::temporal: return "temporal";
    case Study::spatial: return "spatial";
    case Study::identity: return "identity";
    }
    return "temporal";
}

Study study_from_string(std::string_view name) {
    if (name == "temporal") return Study::temporal;
    if (name == "spatial") return Study::spatial;
    if (name == "identity") return Study::identity;
    throw DomainError("unknown study '" + std::string(name) + "' (temporal|spatial|identity)");
}

double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

std::vector<ConvergenceRow> convergence_study(const BeamProblem& problem, const StudySettings& s) {
    if (s.levels < 3) throw DomainError("a convergence study needs at least 3 levels");
    if (s.nodes < 3) throw DomainError("mesh needs at least 3 nodes");
    std::optional<ExactSolution> exact = exact_solution_for(problem);
    if (s.study != Study::identity && !exact) {
        throw DomainError("the " + std::string(to_string(s.study)) + " study needs a problem with an exact solution");
    }
    if (s.study == Study::identity && problem.forcing.active()) {
        throw DomainError("the energy identity holds only without end forcing");
    }
    if (s.study == Study::identity ? !(s.ratio > 0.0) : !(s.dt > 0.0)) {
        throw DomainError("time step and ratio must be positive");
    }

    std::vector<ConvergenceRow> rows(s.levels);
    parallel_for(s.levels, [&](std::size_t k) {
        const std::size_t scale = std::size_t{1} << k;
        std::size_t nodes = s.nodes;
        double dt = s.dt;
        switch (s.study) {
        case Study::temporal: dt = s.dt / static_cast<double>(scale); break;
        case Study::spatial: nodes = (s.nodes - 1) * scale + 1; break;
        case Study::identity:
            nodes = (s.nodes - 1) * scale + 1;
            dt = problem.length / static_cast<double>(nodes - 1) / s.ratio;
            break;
        }
        const Mesh mesh(problem.length, nodes);
        const TimeGrid grid = TimeGrid::from_step(problem.final_time, dt);
        const SolutionTrace trace = run(problem, mesh, grid);
        ConvergenceRow& row = rows[k];
        row.nodes = nodes;
        row.levels = grid.size();
        row.dx = mesh.spacing();
        row.dt = grid.step();
        if (s.study == Study::identity) {
            const EnergyTrace e = energy(trace, s.mode);
            row.error = identity_residual(e);
            row.relative_error = e.E0 > 0.0 ? row.error / e.E0 : row.error;
        } else {
            row.error = max_nodal_error(trace, *exact);
            row.relative_error = row.error;
        }
    });
    for (std::size_t k = 1; k < rows.size(); ++k) rows[k].order = observed_order(rows[k - 1].error, rows[k].error);
    return rows;
}

}  // namespace beamstab
