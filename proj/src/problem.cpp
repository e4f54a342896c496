#include "beamstab/problem.hpp"

#include "beamstab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace beamstab {

using nlohmann::json;

bool BeamProblem::damped() const {
    const double mu0 = coefficient_bounds(mu, length).first;
    return boundary.k_a + boundary.k_v + mu0 > 0.0;
}

std::pair<double, double> coefficient_bounds(const CoefficientField& field, double length) {
    return field.bounds(0.0, length);
}

bool ValidationReport::has_errors() const {
    return std::any_of(violations.begin(), violations.end(),
                       [](const Violation& v) { return v.severity == Severity::error; });
}

bool ValidationReport::has_warnings() const {
    return std::any_of(violations.begin(), violations.end(),
                       [](const Violation& v) { return v.severity == Severity::warning; });
}

namespace {

void require_evaluable(const Profile& p, std::string_view field, double lo, double hi, bool spatial) {
    const std::string name(field);
    if (!p.finite()) throw StructuralError(name + ": non-finite data");
    if (spatial && p.kind() == ProfileKind::exponential) {
        throw StructuralError(name + ": exponential kind is only allowed for forcing signals");
    }
    if (!spatial && (p.kind() == ProfileKind::polynomial || p.kind() == ProfileKind::constant)) {
        throw StructuralError(name + ": forcing must be zero, exponential or table");
    }
    const auto [a, b] = p.support();
    if (a > lo || b < hi) {
        std::ostringstream os;
        os << name << ": table covers [" << a << ", " << b << "] but must cover [" << lo << ", " << hi << "]";
        throw StructuralError(os.str());
    }
}

void add(ValidationReport& report, Severity severity, std::string clause, std::string message) {
    report.violations.push_back({severity, std::move(clause), std::move(message)});
}

}  // namespace

ValidationReport validate(const BeamProblem& p) {
    ValidationReport report;
    if (!std::isfinite(p.length) || !(p.length > 0.0)) {
        throw StructuralError("length: must be a positive finite number");
    }
    if (!std::isfinite(p.final_time) || !(p.final_time > 0.0)) {
        throw StructuralError("final_time: must be a positive finite number");
    }
    const double l = p.length;
    require_evaluable(p.rho, "rho", 0.0, l, true);
    require_evaluable(p.mu, "mu", 0.0, l, true);
    require_evaluable(p.r, "r", 0.0, l, true);
    require_evaluable(p.initial.displacement, "initial.u0", 0.0, l, true);
    require_evaluable(p.initial.velocity, "initial.u1", 0.0, l, true);
    require_evaluable(p.forcing.moment, "forcing.g_M", 0.0, p.final_time, false);
    require_evaluable(p.forcing.shear, "forcing.g_Q", 0.0, p.final_time, false);

    const double rho0 = coefficient_bounds(p.rho, l).first;
    const double r0 = coefficient_bounds(p.r, l).first;
    const double mu0 = coefficient_bounds(p.mu, l).first;
    if (!(rho0 > 0.0)) add(report, Severity::error, "rho0 > 0", "rho0 > 0 fails (inf rho = " + std::to_string(rho0) + ")");
    if (!(r0 > 0.0)) add(report, Severity::error, "r0 > 0", "r0 > 0 fails (inf r = " + std::to_string(r0) + ")");
    if (!(mu0 >= 0.0)) add(report, Severity::error, "mu0 >= 0", "mu0 >= 0 fails (inf mu = " + std::to_string(mu0) + ")");

    const BoundaryParams& k = p.boundary;
    const std::pair<const char*, double> constants[] = {{"k_r", k.k_r}, {"k_a", k.k_a}, {"k_d", k.k_d}, {"k_v", k.k_v}};
    for (const auto& [name, value] : constants) {
        if (!std::isfinite(value)) throw StructuralError(std::string("boundary.") + name + ": non-finite value");
        if (value < 0.0) add(report, Severity::error, std::string(name) + " >= 0", std::string(name) + " >= 0 fails");
    }

    const double u00 = p.initial.displacement.value(0.0);
    const double u00x = p.initial.displacement.derivative(0.0, 1);
    if (std::abs(u00) > 1e-12) add(report, Severity::error, "u0(0) = 0", "u0(0) = 0 fails (clamped end)");
    if (std::abs(u00x) > 1e-12) add(report, Severity::error, "u0'(0) = 0", "u0'(0) = 0 fails (clamped end)");

    if (!report.has_errors() && !(k.k_a + k.k_v + mu0 > 0.0)) {
        add(report, Severity::warning, "k_a + k_v + mu0 > 0",
            "k_a+k_v+mu0>0 fails: no dissipation, decay estimate unavailable");
    }
    return report;
}

namespace {

// Static deflection shape of a uniformly loaded cantilever, (6x^2 - 4x^3 + x^4) / 3,
// with unit tip value. u'' and u''' vanish at x = 1.
Profile free_end_velocity() { return Profile::polynomial({0.0, 0.0, 2.0, -4.0 / 3.0, 1.0 / 3.0}); }

// Unit-tip quartic with -u'' = u' and u''' = u at x = 1 (k_r = k_d = 1).
Profile spring_end_velocity() {
    return Profile::polynomial({0.0, 0.0, 127.0 / 48.0, -108.0 / 48.0, 29.0 / 48.0});
}

// Clamped cubic displacement that pairs with free_end_velocity() under the
// damper end conditions -r u'' = k_a u_t', r u''' = k_v u_t at x = 1.
Profile damper_end_displacement(double bending_stiffness, double k_a, double k_v) {
    const double b = k_v / (6.0 * bending_stiffness);
    const double a = -(4.0 / 3.0 * k_a + k_v) / (2.0 * bending_stiffness);
    return Profile::polynomial({0.0, 0.0, a, b});
}

}  // namespace

BeamProblem mast_constant(double mass_density, double bending_stiffness, double k_a, double k_v) {
    BeamProblem p;
    p.length = 1.0;
    p.final_time = 2.0;
    p.rho = Profile::constant(mass_density);
    p.mu = Profile::zero();
    p.r = Profile::constant(bending_stiffness);
    p.boundary = {0.0, k_a, 0.0, k_v};
    p.initial.displacement = damper_end_displacement(bending_stiffness, k_a, k_v);
    p.initial.velocity = free_end_velocity();
    return p;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"cantilever_free", "cantilever_spring", "cantilever_dampers",
                                                "mast_constant", "test_NE1"};
    return names;
}

BeamProblem preset(std::string_view name) {
    BeamProblem p;
    p.length = 1.0;
    p.final_time = 2.0;
    p.rho = Profile::constant(1.0);
    p.r = Profile::constant(1.0);
    // Start at rest position with a velocity that satisfies the end conditions.
    p.initial.displacement = Profile::zero();
    p.initial.velocity = free_end_velocity();
    if (name == "cantilever_free") {
        p.mu = Profile::constant(2.0);
        p.boundary = {};
    } else if (name == "cantilever_spring") {
        p.mu = Profile::constant(1.0);
        p.boundary = {1.0, 0.0, 1.0, 0.0};
        p.initial.velocity = spring_end_velocity();
    } else if (name == "cantilever_dampers") {
        p.mu = Profile::constant(1.0);
        p.boundary = {0.0, 1.0, 0.0, 1.0};
        p.initial.displacement = damper_end_displacement(1.0, 1.0, 1.0);
    } else if (name == "mast_constant") {
        p = mast_constant(1.0, 1.0, 1.0, 1.0);
    } else if (name == "test_NE1") {
        p.final_time = 1.5;
        p.mu = Profile::constant(2.0);
        p.r = Profile::polynomial({1.0, 1.0});
        p.boundary = {6.0, 3.0, 4.0, 2.0};
        p.initial.displacement = Profile::polynomial({0.0, 0.0, 1.0});
        p.initial.velocity = Profile::polynomial({0.0, 0.0, -2.0});
        p.forcing.moment = Profile::exponential(-4.0, -2.0);
        p.forcing.shear = Profile::exponential(2.0, -2.0);
    } else {
        throw StructuralError("unknown preset '" + std::string(name) + "'");
    }
    return p;
}

json to_json(const Profile& p) {
    json j;
    j["kind"] = std::string(to_string(p.kind()));
    if (p.kind() == ProfileKind::table) {
        json rows = json::array();
        for (std::size_t i = 0; i < p.abscissae().size(); ++i) rows.push_back({p.abscissae()[i], p.values()[i]});
        j["data"] = rows;
    } else {
        j["data"] = std::vector<double>(p.parameters().begin(), p.parameters().end());
    }
    return j;
}

Profile profile_from_json(const json& j, std::string_view field) {
    const std::string name(field);
    try {
        const ProfileKind kind = profile_kind_from_string(j.at("kind").get<std::string>());
        const json& data = j.contains("data") ? j.at("data") : json::array();
        switch (kind) {
        case ProfileKind::zero: return Profile::zero();
        case ProfileKind::constant:
            if (data.size() != 1) throw StructuralError("constant needs exactly one value");
            return Profile::constant(data.at(0).get<double>());
        case ProfileKind::polynomial: return Profile::polynomial(data.get<std::vector<double>>());
        case ProfileKind::exponential:
            if (data.size() != 2) throw StructuralError("exponential needs [amplitude, rate]");
            return Profile::exponential(data.at(0).get<double>(), data.at(1).get<double>());
        case ProfileKind::table: {
            std::vector<double> xs;
            std::vector<double> ys;
            for (const json& row : data) {
                if (row.size() != 2) throw StructuralError("table rows are [x, value] pairs");
                xs.push_back(row.at(0).get<double>());
                ys.push_back(row.at(1).get<double>());
            }
            return Profile::table(std::move(xs), std::move(ys));
        }
        }
    } catch (const StructuralError& e) {
        throw StructuralError(name + ": " + e.what());
    } catch (const json::exception& e) {
        throw StructuralError(name + ": " + e.what());
    }
    return Profile::zero();
}

json to_json(const BeamProblem& p) {
    json j;
    j["length"] = p.length;
    j["final_time"] = p.final_time;
    j["rho"] = to_json(p.rho);
    j["mu"] = to_json(p.mu);
    j["r"] = to_json(p.r);
    j["boundary"] = {{"k_r", p.boundary.k_r}, {"k_a", p.boundary.k_a}, {"k_d", p.boundary.k_d}, {"k_v", p.boundary.k_v}};
    j["forcing"] = {{"g_M", to_json(p.forcing.moment)}, {"g_Q", to_json(p.forcing.shear)}};
    j["initial"] = {{"u0", to_json(p.initial.displacement)}, {"u1", to_json(p.initial.velocity)}};
    return j;
}

BeamProblem problem_from_json(const json& j) {
    const auto number = [&](const json& obj, const char* key, const std::string& where) {
        try {
            return obj.at(key).get<double>();
        } catch (const json::exception& e) {
            throw StructuralError(where + key + ": " + e.what());
        }
    };
    if (!j.is_object()) throw StructuralError("problem file must hold a JSON object");
    BeamProblem p;
    p.length = number(j, "length", "");
    p.final_time = number(j, "final_time", "");
    const auto section = [&](const char* key) -> const json& {
        if (!j.contains(key)) throw StructuralError(std::string("missing key '") + key + "'");
        return j.at(key);
    };
    p.rho = profile_from_json(section("rho"), "rho");
    p.mu = profile_from_json(section("mu"), "mu");
    p.r = profile_from_json(section("r"), "r");
    const json& b = section("boundary");
    p.boundary = {number(b, "k_r", "boundary."), number(b, "k_a", "boundary."), number(b, "k_d", "boundary."),
                  number(b, "k_v", "boundary.")};
    if (j.contains("forcing")) {
        const json& f = j.at("forcing");
        if (f.contains("g_M")) p.forcing.moment = profile_from_json(f.at("g_M"), "forcing.g_M");
        if (f.contains("g_Q")) p.forcing.shear = profile_from_json(f.at("g_Q"), "forcing.g_Q");
    }
    const json& init = section("initial");
    if (!init.contains("u0") || !init.contains("u1")) throw StructuralError("initial: needs u0 and u1");
    p.initial.displacement = profile_from_json(init.at("u0"), "initial.u0");
    p.initial.velocity = profile_from_json(init.at("u1"), "initial.u1");
    return p;
}

std::string serialize(const BeamProblem& problem) { return to_json(problem).dump(2) + "\n"; }

BeamProblem parse_problem(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw StructuralError(std::string("invalid JSON: ") + e.what());
    }
    return problem_from_json(j);
}

BeamProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open problem file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_problem(buffer.str());
}

}  // namespace beamstab
