#pragma once

#include "beamstab/diagnostics.hpp"
#include "beamstab/problem.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beamstab {

/// Which decay result the constants come from.
///   theorem1              inf mu > 0, general end feedback
///   theorem1_special_4_1  inf mu > 0 and k_a = k_v = 0 (tighter beta1)
///   theorem2              mu = 0, window certified post hoc from a trace
enum class Regime { theorem1, theorem1_special_4_1, theorem2 };

std::string_view to_string(Regime regime);

/// Thrown when no penalty lambda > 0 is admissible (no damping at all, or
/// the boundary-velocity condition fails on the grid).
class NoAdmissiblePenalty : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct BetaConstants {
    double beta0;
    double beta1;
    Regime regime;
};

/// beta0 = l^2/2 sqrt(rho1/r0),
/// beta1 = beta0 [1 + (l^2/2 mu1 + 2/l k_a + l k_v) / sqrt(rho1 r0)],
/// or, with k_a = k_v = 0, beta1 = beta0 [1 + l^2 mu1 / (4 sqrt(rho1 r0))].
BetaConstants beta_constants(const BeamProblem& problem);

struct LambdaWindow {
    double lambda_max;
    Regime regime;
    /// theorem2 only: grid inf of k_a^2 u_xt(l)^2 + k_v^2 u_t(l)^2, grid sup
    /// of ||u_t||^2 and where the infimum was attained.
    std::optional<double> feedback_inf;
    std::optional<double> velocity_sup;
    std::optional<double> feedback_inf_time;
};

/// theorem1: min(1/beta0, mu0 / (2 rho1)).
/// theorem2: min(1/beta0, inf_t [k_a^2 u_xt^2 + k_v^2 u_t^2](l, t) / (2 rho1 sup_t ||u_t||^2)),
/// inf/sup taken over the grid levels of `energy` (plus t = 0 from the data).
LambdaWindow lambda_window(const BeamProblem& problem, const EnergyTrace* energy = nullptr);

struct DecayConstants {
    double M_d;
    double sigma;
};

/// M_d = (1 + beta1 lambda) / (1 - beta0 lambda), sigma = 2 lambda / (1 + beta1 lambda).
DecayConstants decay_estimate(double beta0, double beta1, double lambda);

struct ScanRow {
    double lambda;
    double M_d;
    double sigma;
};

/// `points` penalties evenly spaced strictly inside (0, lambda_max).
std::vector<ScanRow> scan_lambda(double beta0, double beta1, double lambda_max, std::size_t points);

struct DecayBound {
    double beta0;
    double beta1;
    double lambda_max;
    double lambda;
    double M_d;
    double sigma;
    Regime regime;
    LambdaWindow window;
};

inline constexpr double default_lambda_fraction = 0.99;

/// Collects the constants; lambda defaults to 0.99 lambda_max. The theorem2
/// regime needs the energy trace of a run.
DecayBound decay_bound(const BeamProblem& problem, const EnergyTrace* energy = nullptr,
                       std::optional<double> lambda = std::nullopt);

struct EnvelopeCheck {
    std::string name;
    std::size_t violations = 0;
    double worst_margin = 0.0;  // min over t of (bound - value); negative means exceeded
    double worst_time = 0.0;
    std::optional<double> first_violation_time;
};

struct EnvelopeReport {
    std::vector<EnvelopeCheck> checks;
    double tolerance;
    double slack;
    bool informational;  // forced run: the envelopes are not claimed

    std::size_t violations() const;
};

inline constexpr double envelope_relative_tolerance = 1e-8;
inline constexpr double envelope_discretization_slack = 1e-3;

/// Checks J <= beta1 E, J >= -beta0 E and E <= M_d exp(-sigma t) E(0) at
/// every level, each with tolerance (1e-8 + 1e-3) E(0).
EnvelopeReport verify_envelopes(const EnergyTrace& energy, const DecayBound& bound);

nlohmann::json to_json(const DecayBound& bound, std::size_t scan_points = 11);
nlohmann::json to_json(const EnvelopeReport& report);

}  // namespace beamstab
