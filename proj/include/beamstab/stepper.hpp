#pragma once

#include "beamstab/fem.hpp"
#include "beamstab/problem.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace beamstab {

/// Uniform time levels t_j = j T / (N - 1), j = 0 .. N-1.
class TimeGrid {
public:
    TimeGrid(double final_time, std::size_t level_count);

    /// Largest uniform step not exceeding the requested one that divides T.
    static TimeGrid from_step(double final_time, double step);

    double step() const { return step_; }
    std::size_t size() const { return count_; }
    double final_time() const { return final_time_; }
    double time(std::size_t j) const;

private:
    double final_time_;
    std::size_t count_;
    double step_;
};

/// Second-order backward-difference integrator for M U'' + C U' + K U = f:
///
///   (2/h^2 M + 3/(2h) C + K) U^j
///       = f(t_j) + M (5 U^{j-1} - 4 U^{j-2} + U^{j-3}) / h^2 + C (4 U^{j-1} - U^{j-2}) / (2h)
///
/// The iteration matrix is factored once at construction.
class BackwardDifferenceStepper {
public:
    BackwardDifferenceStepper(const BandedSymmetricMatrix& mass, const BandedSymmetricMatrix& damping,
                              const BandedSymmetricMatrix& stiffness, double step);

    /// history = {U^{j-1}, U^{j-2}, U^{j-3}}.
    std::vector<double> advance(std::span<const double> previous, std::span<const double> before_previous,
                                std::span<const double> third_previous, std::span<const double> load) const;

private:
    BandedSymmetricMatrix mass_;
    BandedSymmetricMatrix damping_;
    double step_;
    BandedCholesky factor_;
};

struct SolutionTrace {
    TimeGrid grid;
    std::vector<std::vector<double>> dofs;
    std::shared_ptr<const SemiDiscreteSystem> system;
    std::shared_ptr<const BeamProblem> problem;

    const Mesh& mesh() const { return system->mesh(); }
};

/// U^0 (interpolant of u0) and two trapezoidal-rule steps giving U^1, U^2.
/// The trapezoidal rule starts from v^0 = interpolant of u1 and the
/// acceleration solved from M a^0 = f(0) - C v^0 - K U^0.
std::array<std::vector<double>, 3> startup(const SemiDiscreteSystem& system, const BeamProblem& problem,
                                           const TimeGrid& grid);

/// Initial acceleration a^0 used by startup.
std::vector<double> initial_acceleration(const SemiDiscreteSystem& system, std::span<const double> displacement,
                                         std::span<const double> velocity);

/// One backward-difference step producing level j >= 3 (0-based) from
/// levels j-1, j-2, j-3 of `levels`. Factors the iteration matrix on every
/// call; run() keeps a single factorization instead.
std::vector<double> step(const SemiDiscreteSystem& system, const TimeGrid& grid,
                         std::span<const std::vector<double>> levels, std::size_t j);

/// Full trace. Requires at least 4 time levels.
SolutionTrace run(const BeamProblem& problem, const Mesh& mesh, const TimeGrid& grid, std::size_t quad_points = 4);

struct SpaceTimeSample {
    double u;
    double ux;
    double uxx;
    double ut;
};

/// Linear-in-time blend of the two bracketing levels. u_t is the centered
/// quotient at interior grid times and the chord slope elsewhere.
SpaceTimeSample interpolate(const SolutionTrace& trace, double x, double t);

/// CSV "t,node,u,u_x", every `decimation`-th level (the last level always).
void write_trace_csv(std::ostream& out, const SolutionTrace& trace, std::size_t decimation = 1);

}  // namespace beamstab
