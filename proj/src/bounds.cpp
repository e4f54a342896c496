#include "beamstab/bounds.hpp"

#include "beamstab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace beamstab {

std::string_view to_string(Regime regime) {
    switch (regime) {
    case Regime::theorem1: return "theorem1";
    case Regime::theorem1_special_4_1: return "theorem1_special_4_1";
    case Regime::theorem2: return "theorem2";
    }
    return "theorem1";
}

BetaConstants beta_constants(const BeamProblem& p) {
    const double l = p.length;
    const double rho1 = coefficient_bounds(p.rho, l).second;
    const double r0 = coefficient_bounds(p.r, l).first;
    const double mu1 = coefficient_bounds(p.mu, l).second;
    const double root = std::sqrt(rho1 * r0);
    const double beta0 = l * l / 2.0 * std::sqrt(rho1 / r0);
    const BoundaryParams& k = p.boundary;
    if (k.k_a == 0.0 && k.k_v == 0.0) {
        return {beta0, beta0 * (1.0 + l * l / (4.0 * root) * mu1), Regime::theorem1_special_4_1};
    }
    const double bracket = 1.0 + (l * l / 2.0 * mu1 + 2.0 / l * k.k_a + l * k.k_v) / root;
    return {beta0, beta0 * bracket, Regime::theorem1};
}

LambdaWindow lambda_window(const BeamProblem& p, const EnergyTrace* energy) {
    const double l = p.length;
    const double rho1 = coefficient_bounds(p.rho, l).second;
    const double mu0 = coefficient_bounds(p.mu, l).first;
    const BetaConstants beta = beta_constants(p);
    const BoundaryParams& k = p.boundary;
    if (mu0 > 0.0) {
        return {std::min(1.0 / beta.beta0, mu0 / (2.0 * rho1)), beta.regime, std::nullopt, std::nullopt,
                std::nullopt};
    }
    if (k.k_a + k.k_v <= 0.0) {
        throw NoAdmissiblePenalty("no admissible penalty: k_a + k_v + mu0 > 0 fails (no damping)");
    }
    if (energy == nullptr) {
        throw NoAdmissiblePenalty("mu = 0: the boundary-feedback window needs a computed trace");
    }
    if (energy->times.empty()) throw NoAdmissiblePenalty("energy trace has no interior levels");

    const double ka2 = k.k_a * k.k_a;
    const double kv2 = k.k_v * k.k_v;
    // t = 0 from the initial velocity
    const Profile& u1 = p.initial.velocity;
    const double v0 = u1.value(l);
    const double w0 = u1.derivative(l, 1);
    double inf_feedback = ka2 * w0 * w0 + kv2 * v0 * v0;
    double inf_time = 0.0;
    if (!(w0 * w0 + v0 * v0 > 0.0)) {
        throw NoAdmissiblePenalty("u_xt(l,t)^2 + u_t(l,t)^2 > 0 fails at t = 0");
    }
    double sup_velocity = energy->initial_velocity_l2_sq;
    for (std::size_t i = 0; i < energy->times.size(); ++i) {
        const double ut2 = energy->tip_velocity_sq[i];
        const double uxt2 = energy->tip_angular_velocity_sq[i];
        if (!(ut2 + uxt2 > 0.0)) {
            throw NoAdmissiblePenalty("u_xt(l,t)^2 + u_t(l,t)^2 > 0 fails at t = " + std::to_string(energy->times[i]));
        }
        const double fb = ka2 * uxt2 + kv2 * ut2;
        if (fb < inf_feedback) {
            inf_feedback = fb;
            inf_time = energy->times[i];
        }
        sup_velocity = std::max(sup_velocity, energy->velocity_l2_sq[i]);
    }
    const double quotient = inf_feedback / (2.0 * rho1 * sup_velocity);
    return {std::min(1.0 / beta.beta0, quotient), Regime::theorem2, inf_feedback, sup_velocity, inf_time};
}

DecayConstants decay_estimate(double beta0, double beta1, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("penalty lambda must be positive");
    if (!(beta0 * lambda < 1.0)) throw DomainError("penalty lambda must stay below 1/beta0");
    return {(1.0 + beta1 * lambda) / (1.0 - beta0 * lambda), 2.0 * lambda / (1.0 + beta1 * lambda)};
}

std::vector<ScanRow> scan_lambda(double beta0, double beta1, double lambda_max, std::size_t points) {
    if (points < 2) throw DomainError("scan needs at least 2 points");
    std::vector<ScanRow> rows;
    rows.reserve(points);
    for (std::size_t i = 1; i <= points; ++i) {
        const double lambda = lambda_max * static_cast<double>(i) / static_cast<double>(points + 1);
        const DecayConstants c = decay_estimate(beta0, beta1, lambda);
        rows.push_back({lambda, c.M_d, c.sigma});
    }
    return rows;
}

DecayBound decay_bound(const BeamProblem& problem, const EnergyTrace* energy, std::optional<double> lambda) {
    const BetaConstants beta = beta_constants(problem);
    const LambdaWindow window = lambda_window(problem, energy);
    const double chosen = lambda.value_or(default_lambda_fraction * window.lambda_max);
    if (!(chosen > 0.0 && chosen < window.lambda_max)) {
        throw DomainError("penalty lambda = " + std::to_string(chosen) + " outside the admissible window (0, " +
                          std::to_string(window.lambda_max) + ")");
    }
    const DecayConstants c = decay_estimate(beta.beta0, beta.beta1, chosen);
    return {beta.beta0, beta.beta1, window.lambda_max, chosen, c.M_d, c.sigma, window.regime, window};
}

std::size_t EnvelopeReport::violations() const {
    std::size_t total = 0;
    for (const auto& c : checks) total += c.violations;
    return total;
}

EnvelopeReport verify_envelopes(const EnergyTrace& energy, const DecayBound& bound) {
    EnvelopeReport report;
    report.slack = envelope_discretization_slack * energy.E0;
    report.tolerance = envelope_relative_tolerance * energy.E0 + report.slack;
    report.informational = energy.forced;
    EnvelopeCheck upper;
    EnvelopeCheck lower;
    EnvelopeCheck decay;
    upper.name = "J <= beta1 E";
    lower.name = "J >= -beta0 E";
    decay.name = "E <= M_d exp(-sigma t) E(0)";
    for (EnvelopeCheck* c : {&upper, &lower, &decay}) c->worst_margin = std::numeric_limits<double>::infinity();
    const auto record = [&](EnvelopeCheck& c, double margin, double t) {
        if (margin < c.worst_margin) {
            c.worst_margin = margin;
            c.worst_time = t;
        }
        if (margin < -report.tolerance) {
            ++c.violations;
            if (!c.first_violation_time) c.first_violation_time = t;
        }
    };
    for (std::size_t i = 0; i < energy.times.size(); ++i) {
        const double t = energy.times[i];
        const double e = energy.E[i];
        const double j = energy.J[i];
        record(upper, bound.beta1 * e - j, t);
        record(lower, j + bound.beta0 * e, t);
        record(decay, bound.M_d * std::exp(-bound.sigma * t) * energy.E0 - e, t);
    }
    report.checks = {upper, lower, decay};
    return report;
}

nlohmann::json to_json(const DecayBound& b, std::size_t scan_points) {
    nlohmann::json j;
    j["beta0"] = b.beta0;
    j["beta1"] = b.beta1;
    j["lambda_max"] = b.lambda_max;
    j["lambda"] = b.lambda;
    j["M_d"] = b.M_d;
    j["sigma"] = b.sigma;
    j["regime"] = std::string(to_string(b.regime));
    nlohmann::json scan = nlohmann::json::array();
    for (const ScanRow& row : scan_lambda(b.beta0, b.beta1, b.lambda_max, scan_points)) {
        scan.push_back({{"lambda", row.lambda}, {"M_d", row.M_d}, {"sigma", row.sigma}});
    }
    j["scan"] = scan;
    if (b.regime == Regime::theorem2) {
        j["window"] = {{"feedback_inf", *b.window.feedback_inf},
                       {"velocity_sup", *b.window.velocity_sup},
                       {"feedback_inf_time", *b.window.feedback_inf_time},
                       {"note", "grid infimum/supremum used as proxies for the continuum inf/sup"}};
    }
    return j;
}

nlohmann::json to_json(const EnvelopeReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const EnvelopeCheck& c : r.checks) {
        nlohmann::json item{{"name", c.name},
                            {"violations", c.violations},
                            {"worst_margin", c.worst_margin},
                            {"worst_time", c.worst_time}};
        item["first_violation_time"] = c.first_violation_time ? nlohmann::json(*c.first_violation_time) : nullptr;
        checks.push_back(item);
    }
    return {{"checks", checks},
            {"tolerance", r.tolerance},
            {"slack", r.slack},
            {"violations", r.violations()},
            {"informational_only", r.informational}};
}

}  // namespace beamstab
