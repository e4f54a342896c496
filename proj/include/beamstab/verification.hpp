#pragma once

#include "beamstab/diagnostics.hpp"
#include "beamstab/stepper.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace beamstab {

/// Closed-form solution u(x, t) with the derivatives the error tables need.
struct ExactSolution {
    std::function<double(double, double)> u;
    std::function<double(double, double)> ux;
    std::function<double(double, double)> uxx;
    std::function<double(double, double)> ut;
};

/// u = x^2 exp(-2t) of the test_NE1 preset.
ExactSolution ne1_exact_solution();

/// The exact solution attached to a problem, if any. Only test_NE1 has one;
/// the final time may differ from the preset's.
std::optional<ExactSolution> exact_solution_for(const BeamProblem& problem);

struct ErrorNorm {
    double max = 0.0;
    double l2 = 0.0;  // discrete L2(0, T; L2(0, l)), trapezoidal in time
};

/// Errors of u, u_x, u_t and u_xx over the interior levels t_1 .. t_{N-2},
/// sampled at the nodes and the Gauss points of every element. u_xx uses
/// the given curvature mode. `nodal_u` is the max displacement-DOF error
/// over all levels.
struct ErrorTable {
    ErrorNorm u;
    ErrorNorm ux;
    ErrorNorm ut;
    ErrorNorm uxx;
    double nodal_u = 0.0;
};

ErrorTable solution_errors(const SolutionTrace& trace, const ExactSolution& exact,
                           CurvatureMode mode = CurvatureMode::paper);

/// Max over nodes and levels of |U - u(x_i, t_j)| for the displacement DOFs.
double max_nodal_error(const SolutionTrace& trace, const ExactSolution& exact);

/// temporal: fixed mesh, h_t halved per level, error = max nodal u error
/// spatial:  fixed h_t, h_x halved per level, error = max nodal u error
/// identity: h_x and h_t halved together, error = energy identity residual
enum class Study { temporal, spatial, identity };

std::string_view to_string(Study study);
Study study_from_string(std::string_view name);

struct ConvergenceRow {
    std::size_t nodes;
    std::size_t levels;
    double dx;
    double dt;
    double error;
    double relative_error;  // identity: error / E(0); otherwise error
    std::optional<double> order;
};

struct StudySettings {
    Study study = Study::temporal;
    std::size_t nodes = 41;  // coarsest mesh
    double dt = 0.01;        // coarsest step (temporal, spatial)
    double ratio = 40.0;     // h_t = h_x / ratio (identity)
    std::size_t levels = 4;
    CurvatureMode mode = CurvatureMode::paper;
};

/// Runs the levels concurrently. temporal and spatial need an exact
/// solution; identity refuses forced problems. Requires levels >= 3.
std::vector<ConvergenceRow> convergence_study(const BeamProblem& problem, const StudySettings& settings);

/// log2(e_coarse / e_fine) between consecutive halvings.
double observed_order(double coarse, double fine);

}  // namespace beamstab
