#pragma once

#include "beamstab/stepper.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace beamstab {

/// How u_xx is recovered from a trace for the energy functionals.
///   paper: centered x-difference of the nodal slopes, linear between nodes
///   basis: exact second derivative of the Hermite interpolant
enum class CurvatureMode { paper, basis };

std::string_view to_string(CurvatureMode mode);
CurvatureMode curvature_mode_from_string(std::string_view name);

/// Energy and Lyapunov functionals on the interior levels t_1 .. t_{N-2}
/// (0-based), where the centered time quotient is defined.
///
///   E   = 1/2 int (rho u_t^2 + r u_xx^2) + 1/2 k_r u_x(l)^2 + 1/2 k_d u(l)^2
///   J   = int rho u u_t + 1/2 int mu u^2 + 1/2 k_a u_x(l)^2 + 1/2 k_v u(l)^2
///   L   = E + lambda J
///   j_* = cumulative dissipation (trapezoidal in time from t = 0)
///   residual = E(0) - E - (j_mu + j_a + j_v)
struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> E;
    std::vector<double> J;
    std::vector<double> L;  // empty unless a penalty was requested
    std::vector<double> j_mu;
    std::vector<double> j_a;
    std::vector<double> j_v;
    std::vector<double> residual;
    /// Ingredients of the boundary-feedback window: u_t(l)^2 and u_xt(l)^2
    /// (weighted by k_v^2 and k_a^2 later) and the plain int u_t^2.
    std::vector<double> tip_velocity_sq;
    std::vector<double> tip_angular_velocity_sq;
    std::vector<double> velocity_l2_sq;
    double initial_velocity_l2_sq = 0.0;
    double E0 = 0.0;
    double J0 = 0.0;
    std::optional<double> lambda;
    bool forced = false;
    CurvatureMode mode = CurvatureMode::paper;
};

/// (U^{j+1} - U^{j-1}) / (2 h_t) for 1 <= j <= N-2.
std::vector<double> time_derivative(const SolutionTrace& trace, std::size_t j);

/// x -> u_xx(x, t_j) in the requested mode.
std::function<double(double)> curvature_field(const SolutionTrace& trace, std::size_t j, CurvatureMode mode);

/// Nodal curvature values used by paper mode: centered differences of the
/// slopes inside, second-order one-sided differences at both ends.
std::vector<double> nodal_curvature(const Mesh& mesh, std::span<const double> dofs);

/// E(0) and J(0) from the analytic initial data.
double initial_energy(const BeamProblem& problem, const Mesh& mesh);
double initial_auxiliary(const BeamProblem& problem, const Mesh& mesh);

/// Throws DomainError when lambda is given and outside (0, lambda_max).
EnergyTrace energy(const SolutionTrace& trace, CurvatureMode mode = CurvatureMode::paper,
                   std::optional<double> lambda = std::nullopt, double lambda_max = 0.0);

/// max |E(0) - E(t) - j_mu - j_a - j_v|. Refuses forced traces, where the
/// identity does not hold.
double identity_residual(const EnergyTrace& energy);

/// CSV "t,E,J,L,j_mu,j_a,j_v,residual"; L is empty when no penalty was set.
void write_energy_csv(std::ostream& out, const EnergyTrace& energy);

}  // namespace beamstab
