#include "beamstab/stepper.hpp"

#include "beamstab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace beamstab {

TimeGrid::TimeGrid(double final_time, std::size_t level_count)
    : final_time_(final_time), count_(level_count), step_(0.0) {
    if (!(final_time > 0.0)) throw DomainError("final time must be positive");
    if (level_count < 4) throw DomainError("time grid needs at least 4 levels");
    step_ = final_time / static_cast<double>(level_count - 1);
}

TimeGrid TimeGrid::from_step(double final_time, double step) {
    if (!(step > 0.0)) throw DomainError("time step must be positive");
    const double intervals = std::ceil(final_time / step - 1e-9);
    return TimeGrid(final_time, static_cast<std::size_t>(std::max(intervals, 3.0)) + 1);
}

double TimeGrid::time(std::size_t j) const {
    return final_time_ * static_cast<double>(j) / static_cast<double>(count_ - 1);
}

BackwardDifferenceStepper::BackwardDifferenceStepper(const BandedSymmetricMatrix& mass,
                                                     const BandedSymmetricMatrix& damping,
                                                     const BandedSymmetricMatrix& stiffness, double step)
    : mass_(mass),
      damping_(damping),
      step_(step),
      factor_(mass.combined(2.0 / (step * step), damping, 1.5 / step).combined(1.0, stiffness, 1.0)) {}

std::vector<double> BackwardDifferenceStepper::advance(std::span<const double> u1, std::span<const double> u2,
                                                       std::span<const double> u3,
                                                       std::span<const double> load) const {
    const std::size_t n = u1.size();
    std::vector<double> a(n);
    std::vector<double> b(n);
    const double ih2 = 1.0 / (step_ * step_);
    const double i2h = 0.5 / step_;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = (5.0 * u1[i] - 4.0 * u2[i] + u3[i]) * ih2;
        b[i] = (4.0 * u1[i] - u2[i]) * i2h;
    }
    std::vector<double> rhs = mass_.multiply(a);
    const std::vector<double> cb = damping_.multiply(b);
    for (std::size_t i = 0; i < n; ++i) rhs[i] += cb[i] + load[i];
    factor_.solve_in_place(rhs);
    return rhs;
}

std::vector<double> initial_acceleration(const SemiDiscreteSystem& system, std::span<const double> displacement,
                                         std::span<const double> velocity) {
    std::vector<double> rhs = system.load(0.0);
    const std::vector<double> cv = system.damping().multiply(velocity);
    const std::vector<double> ku = system.stiffness().multiply(displacement);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= cv[i] + ku[i];
    return BandedCholesky(system.mass()).solve(rhs);
}

std::array<std::vector<double>, 3> startup(const SemiDiscreteSystem& system, const BeamProblem& problem,
                                           const TimeGrid& grid) {
    const Mesh& mesh = system.mesh();
    const std::size_t n = system.size();
    const double h = grid.step();
    std::vector<double> u = interpolate_nodal(mesh, problem.initial.displacement);
    std::vector<double> v = interpolate_nodal(mesh, problem.initial.velocity);
    std::vector<double> a = initial_acceleration(system, u, v);

    // Trapezoidal rule (average acceleration) on the first-order form.
    const BandedCholesky effective(
        system.mass().combined(1.0, system.damping(), 0.5 * h).combined(1.0, system.stiffness(), 0.25 * h * h));
    std::array<std::vector<double>, 3> levels;
    levels[0] = u;
    for (std::size_t j = 1; j <= 2; ++j) {
        std::vector<double> vp(n);
        std::vector<double> up(n);
        for (std::size_t i = 0; i < n; ++i) {
            vp[i] = v[i] + 0.5 * h * a[i];
            up[i] = u[i] + h * v[i] + 0.25 * h * h * a[i];
        }
        std::vector<double> rhs = system.load(grid.time(j));
        const std::vector<double> cv = system.damping().multiply(vp);
        const std::vector<double> ku = system.stiffness().multiply(up);
        for (std::size_t i = 0; i < n; ++i) rhs[i] -= cv[i] + ku[i];
        effective.solve_in_place(rhs);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = vp[i] + 0.5 * h * rhs[i];
            u[i] = up[i] + 0.25 * h * h * rhs[i];
        }
        a = std::move(rhs);
        levels[j] = u;
    }
    return levels;
}

std::vector<double> step(const SemiDiscreteSystem& system, const TimeGrid& grid,
                         std::span<const std::vector<double>> levels, std::size_t j) {
    if (j < 3 || j > levels.size()) throw DomainError("backward-difference step needs three earlier levels");
    const BackwardDifferenceStepper stepper(system.mass(), system.damping(), system.stiffness(), grid.step());
    return stepper.advance(levels[j - 1], levels[j - 2], levels[j - 3], system.load(grid.time(j)));
}

SolutionTrace run(const BeamProblem& problem, const Mesh& mesh, const TimeGrid& grid, std::size_t quad_points) {
    auto shared_problem = std::make_shared<const BeamProblem>(problem);
    auto system = std::make_shared<const SemiDiscreteSystem>(assemble(problem, mesh, quad_points));
    SolutionTrace trace{grid, {}, system, shared_problem};
    trace.dofs.reserve(grid.size());
    for (auto& level : startup(*system, problem, grid)) trace.dofs.push_back(std::move(level));
    const BackwardDifferenceStepper stepper(system->mass(), system->damping(), system->stiffness(), grid.step());
    for (std::size_t j = 3; j < grid.size(); ++j) {
        trace.dofs.push_back(
            stepper.advance(trace.dofs[j - 1], trace.dofs[j - 2], trace.dofs[j - 3], system->load(grid.time(j))));
    }
    return trace;
}

SpaceTimeSample interpolate(const SolutionTrace& trace, double x, double t) {
    const TimeGrid& grid = trace.grid;
    if (!(t >= 0.0 && t <= grid.final_time())) throw DomainError("t = " + std::to_string(t) + " outside [0, T]");
    const double h = grid.step();
    std::size_t j = std::min(static_cast<std::size_t>(std::floor(t / h)), grid.size() - 2);
    // correct for rounding so that t_j <= t <= t_{j+1}
    while (j > 0 && grid.time(j) > t) --j;
    while (j + 2 < grid.size() && grid.time(j + 1) < t) ++j;
    const double t0 = grid.time(j);
    const double t1 = grid.time(j + 1);
    const FieldValue a = evaluate_solution(trace.mesh(), trace.dofs[j], x);
    const FieldValue b = evaluate_solution(trace.mesh(), trace.dofs[j + 1], x);
    const double w = (t - t0) / (t1 - t0);
    SpaceTimeSample s{(1.0 - w) * a.u + w * b.u, (1.0 - w) * a.ux + w * b.ux, (1.0 - w) * a.uxx + w * b.uxx,
                      (b.u - a.u) / (t1 - t0)};
    // centered quotient on interior grid times
    std::size_t grid_index = grid.size();
    if (t == t0) grid_index = j;
    if (t == t1) grid_index = j + 1;
    if (grid_index > 0 && grid_index + 1 < grid.size()) {
        const double up = evaluate_solution(trace.mesh(), trace.dofs[grid_index + 1], x).u;
        const double um = evaluate_solution(trace.mesh(), trace.dofs[grid_index - 1], x).u;
        s.ut = (up - um) / (2.0 * h);
    }
    return s;
}

void write_trace_csv(std::ostream& out, const SolutionTrace& trace, std::size_t decimation) {
    decimation = std::max<std::size_t>(decimation, 1);
    const Mesh& mesh = trace.mesh();
    const DofMap map = trace.system->dof_map();
    out << "t,node,u,u_x\n";
    out << std::setprecision(12);
    const std::size_t last = trace.grid.size() - 1;
    for (std::size_t j = 0; j <= last; ++j) {
        if (j % decimation != 0 && j != last) continue;
        const double t = trace.grid.time(j);
        for (std::size_t i = 0; i < mesh.node_count(); ++i) {
            const double u = i == 0 ? 0.0 : trace.dofs[j][*map.displacement(i)];
            const double ux = i == 0 ? 0.0 : trace.dofs[j][*map.rotation(i)];
            out << t << ',' << i << ',' << u << ',' << ux << '\n';
        }
    }
}

}  // namespace beamstab
