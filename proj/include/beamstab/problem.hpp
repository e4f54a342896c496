#pragma once

#include "beamstab/profile.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace beamstab {

using CoefficientField = Profile;

/// Boundary springs (k_r rotational, k_d displacement) and dampers
/// (k_a angular, k_v velocity) at the free end x = l.
struct BoundaryParams {
    double k_r = 0.0;
    double k_a = 0.0;
    double k_d = 0.0;
    double k_v = 0.0;

    bool operator==(const BoundaryParams&) const = default;
};

/// Inhomogeneous terms of the end conditions at x = l:
///
///   -r u_xx       = k_r u_x + k_a u_xt + moment(t)
///   (r u_xx)_x    = k_d u   + k_v u_t  + shear(t)
///
/// Zero by default; a nonzero forcing voids the dissipation and decay claims.
struct BoundaryForcing {
    Profile moment;
    Profile shear;

    bool active() const { return !moment.is_zero() || !shear.is_zero(); }
    bool operator==(const BoundaryForcing&) const = default;
};

struct InitialData {
    Profile displacement;
    Profile velocity;

    bool operator==(const InitialData&) const = default;
};

/// rho u_tt + mu u_t + (r u_xx)_xx = 0 on (0, l) x (0, T), clamped at x = 0.
struct BeamProblem {
    double length = 1.0;
    double final_time = 1.0;
    CoefficientField rho = Profile::constant(1.0);
    CoefficientField mu = Profile::zero();
    CoefficientField r = Profile::constant(1.0);
    BoundaryParams boundary;
    BoundaryForcing forcing;
    InitialData initial;

    /// k_a + k_v + inf mu > 0. When false, no Lyapunov penalty is admissible.
    bool damped() const;

    bool operator==(const BeamProblem&) const = default;
};

/// inf and sup of a coefficient over [0, l]; exact for every supported kind.
std::pair<double, double> coefficient_bounds(const CoefficientField& field, double length);

enum class Severity { error, warning };

struct Violation {
    Severity severity;
    std::string clause;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool empty() const { return violations.empty(); }
    bool has_errors() const;
    bool has_warnings() const;
};

/// Checks the admissibility conditions on the inputs. Throws StructuralError
/// when a field cannot be evaluated on its domain; clause failures are
/// returned as report entries.
ValidationReport validate(const BeamProblem& problem);

/// Names: cantilever_free, cantilever_spring, cantilever_dampers,
/// mast_constant, test_NE1.
BeamProblem preset(std::string_view name);
const std::vector<std::string>& preset_names();

/// Constant-coefficient mast model m u_tt + EI u_xxxx = 0 with end dampers.
BeamProblem mast_constant(double mass_density, double bending_stiffness, double k_a, double k_v);

nlohmann::json to_json(const Profile& profile);
Profile profile_from_json(const nlohmann::json& j, std::string_view field);
nlohmann::json to_json(const BeamProblem& problem);
BeamProblem problem_from_json(const nlohmann::json& j);

std::string serialize(const BeamProblem& problem);
BeamProblem parse_problem(std::string_view text);
BeamProblem load_problem(const std::string& path);

}  // namespace beamstab
