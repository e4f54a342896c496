#include "beamstab/diagnostics.hpp"

#include "beamstab/errors.hpp"
#include "beamstab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace beamstab {

std::string_view to_string(CurvatureMode mode) { return mode == CurvatureMode::paper ? "paper" : "basis"; }

CurvatureMode curvature_mode_from_string(std::string_view name) {
    if (name == "paper") return CurvatureMode::paper;
    if (name == "basis") return CurvatureMode::basis;
    throw DomainError("unknown curvature mode '" + std::string(name) + "' (expected paper or basis)");
}

namespace {

std::vector<double> coefficient_breaks(const BeamProblem& p, std::initializer_list<const Profile*> extra = {}) {
    std::vector<double> out;
    for (const Profile* c : {&p.rho, &p.mu, &p.r}) {
        const auto b = c->breakpoints(0.0, p.length);
        out.insert(out.end(), b.begin(), b.end());
    }
    for (const Profile* c : extra) {
        const auto b = c->breakpoints(0.0, p.length);
        out.insert(out.end(), b.begin(), b.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Integrates f(x, element) over [0, l], element by element, split at breaks.
template <class F>
double integrate(const Mesh& mesh, std::span<const double> breaks, std::size_t q, F&& f) {
    const QuadratureRule& rule = gauss_legendre(q);
    double total = 0.0;
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        for_each_piece(mesh.node(e), mesh.node(e + 1), breaks, [&](double a, double b) {
            for (std::size_t g = 0; g < rule.size(); ++g) {
                const double x = a + (b - a) * rule.points[g];
                total += (b - a) * rule.weights[g] * f(x, e);
            }
        });
    }
    return total;
}

std::size_t initial_quad_points(const BeamProblem& p, std::size_t base) {
    int deg = 0;
    for (const Profile* c : {&p.rho, &p.mu, &p.r}) deg = std::max(deg, c->degree());
    int data = std::max(p.initial.displacement.degree(), p.initial.velocity.degree());
    if (data < 0) data = 8;
    return std::max<std::size_t>(base, static_cast<std::size_t>((2 * data + deg + 2) / 2));
}

// Field value from free DOFs of element e at x, with the element fixed so
// that quadrature points never switch elements.
FieldValue element_field(const Mesh& mesh, std::span<const double> dofs, std::size_t e, double x) {
    const DofMap map{mesh.node_count()};
    const double h = mesh.spacing();
    const auto s = hermite_shapes((x - mesh.node(e)) / h, h);
    const auto global = map.element(e);
    FieldValue out{0.0, 0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
        if (!global[i]) continue;
        const double c = dofs[*global[i]];
        out.u += c * s[i].value;
        out.ux += c * s[i].dx;
        out.uxx += c * s[i].dxx;
    }
    return out;
}

double linear_nodal(const Mesh& mesh, std::span<const double> nodal, std::size_t e, double x) {
    const double w = (x - mesh.node(e)) / mesh.spacing();
    return (1.0 - w) * nodal[e] + w * nodal[e + 1];
}

}  // namespace

std::vector<double> time_derivative(const SolutionTrace& trace, std::size_t j) {
    if (j == 0 || j + 1 >= trace.grid.size()) {
        throw DomainError("centered time quotient needs an interior level, got j = " + std::to_string(j));
    }
    const auto& up = trace.dofs[j + 1];
    const auto& um = trace.dofs[j - 1];
    const double inv = 1.0 / (2.0 * trace.grid.step());
    std::vector<double> v(up.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (up[i] - um[i]) * inv;
    return v;
}

std::vector<double> nodal_curvature(const Mesh& mesh, std::span<const double> dofs) {
    const std::size_t m = mesh.node_count();
    const DofMap map{m};
    std::vector<double> slope(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) slope[i] = dofs[*map.rotation(i)];
    const double h = mesh.spacing();
    std::vector<double> c(m);
    for (std::size_t i = 1; i + 1 < m; ++i) c[i] = (slope[i + 1] - slope[i - 1]) / (2.0 * h);
    c[0] = (-3.0 * slope[0] + 4.0 * slope[1] - slope[2]) / (2.0 * h);
    c[m - 1] = (3.0 * slope[m - 1] - 4.0 * slope[m - 2] + slope[m - 3]) / (2.0 * h);
    return c;
}

std::function<double(double)> curvature_field(const SolutionTrace& trace, std::size_t j, CurvatureMode mode) {
    if (j >= trace.grid.size()) throw DomainError("time index out of range");
    const Mesh& mesh = trace.mesh();
    std::vector<double> dofs = trace.dofs[j];
    if (mode == CurvatureMode::basis) {
        return [mesh, dofs = std::move(dofs)](double x) { return evaluate_solution(mesh, dofs, x).uxx; };
    }
    std::vector<double> nodal = nodal_curvature(mesh, dofs);
    return [mesh, nodal = std::move(nodal)](double x) { return linear_nodal(mesh, nodal, mesh.locate(x), x); };
}

double initial_energy(const BeamProblem& p, const Mesh& mesh) {
    const Profile& u0 = p.initial.displacement;
    const Profile& u1 = p.initial.velocity;
    const auto breaks = coefficient_breaks(p, {&u0, &u1});
    const double bulk = integrate(mesh, breaks, initial_quad_points(p, 6), [&](double x, std::size_t) {
        const double v = u1.value(x);
        const double k = u0.derivative(x, 2);
        return p.rho.value(x) * v * v + p.r.value(x) * k * k;
    });
    const double l = p.length;
    const double slope = u0.derivative(l, 1);
    const double tip = u0.value(l);
    return 0.5 * bulk + 0.5 * p.boundary.k_r * slope * slope + 0.5 * p.boundary.k_d * tip * tip;
}

double initial_auxiliary(const BeamProblem& p, const Mesh& mesh) {
    const Profile& u0 = p.initial.displacement;
    const Profile& u1 = p.initial.velocity;
    const auto breaks = coefficient_breaks(p, {&u0, &u1});
    const double bulk = integrate(mesh, breaks, initial_quad_points(p, 6), [&](double x, std::size_t) {
        const double u = u0.value(x);
        return p.rho.value(x) * u * u1.value(x) + 0.5 * p.mu.value(x) * u * u;
    });
    const double l = p.length;
    const double slope = u0.derivative(l, 1);
    const double tip = u0.value(l);
    return bulk + 0.5 * p.boundary.k_a * slope * slope + 0.5 * p.boundary.k_v * tip * tip;
}

EnergyTrace energy(const SolutionTrace& trace, CurvatureMode mode, std::optional<double> lambda,
                   double lambda_max) {
    if (lambda && !(*lambda > 0.0 && *lambda < lambda_max)) {
        throw DomainError("penalty lambda = " + std::to_string(*lambda) + " outside the admissible window (0, " +
                          std::to_string(lambda_max) + ")");
    }
    const BeamProblem& p = *trace.problem;
    const Mesh& mesh = trace.mesh();
    const DofMap map = trace.system->dof_map();
    const std::size_t q = trace.system->quad_points();
    const auto breaks = coefficient_breaks(p);
    const BoundaryParams& k = p.boundary;
    const std::size_t levels = trace.grid.size();

    EnergyTrace out;
    out.mode = mode;
    out.lambda = lambda;
    out.forced = p.forcing.active();
    out.E0 = initial_energy(p, mesh);
    out.J0 = initial_auxiliary(p, mesh);

    // dissipation integrands at t = 0 from the analytic velocity
    const Profile& u1 = p.initial.velocity;
    const auto init_breaks = coefficient_breaks(p, {&u1});
    double prev_mu = integrate(mesh, init_breaks, initial_quad_points(p, q), [&](double x, std::size_t) {
        const double v = u1.value(x);
        return p.mu.value(x) * v * v;
    });
    out.initial_velocity_l2_sq = integrate(mesh, init_breaks, initial_quad_points(p, q), [&](double x, std::size_t) {
        const double v = u1.value(x);
        return v * v;
    });
    const double v1l = u1.value(p.length);
    const double w1l = u1.derivative(p.length, 1);
    double prev_a = k.k_a * w1l * w1l;
    double prev_v = k.k_v * v1l * v1l;
    double acc_mu = 0.0;
    double acc_a = 0.0;
    double acc_v = 0.0;
    double prev_t = 0.0;

    const std::size_t count = levels - 2;
    for (auto* column : {&out.times, &out.E, &out.J, &out.j_mu, &out.j_a, &out.j_v, &out.residual,
                         &out.tip_velocity_sq, &out.tip_angular_velocity_sq, &out.velocity_l2_sq}) {
        column->reserve(count);
    }

    for (std::size_t j = 1; j + 1 < levels; ++j) {
        const std::vector<double>& u = trace.dofs[j];
        const std::vector<double> v = time_derivative(trace, j);
        std::vector<double> nodal;
        if (mode == CurvatureMode::paper) nodal = nodal_curvature(mesh, u);

        double kinetic = 0.0;
        double bending = 0.0;
        double cross = 0.0;
        double viscous = 0.0;
        double dissipation = 0.0;
        double speed = 0.0;
        const QuadratureRule& rule = gauss_legendre(q);
        for (std::size_t e = 0; e < mesh.element_count(); ++e) {
            for_each_piece(mesh.node(e), mesh.node(e + 1), breaks, [&](double a, double b) {
                for (std::size_t g = 0; g < rule.size(); ++g) {
                    const double x = a + (b - a) * rule.points[g];
                    const double w = (b - a) * rule.weights[g];
                    const FieldValue fu = element_field(mesh, u, e, x);
                    const double ut = element_field(mesh, v, e, x).u;
                    const double uxx = mode == CurvatureMode::basis ? fu.uxx : linear_nodal(mesh, nodal, e, x);
                    const double rho = p.rho.value(x);
                    const double mu = p.mu.value(x);
                    kinetic += w * rho * ut * ut;
                    bending += w * p.r.value(x) * uxx * uxx;
                    cross += w * rho * fu.u * ut;
                    viscous += w * mu * fu.u * fu.u;
                    dissipation += w * mu * ut * ut;
                    speed += w * ut * ut;
                }
            });
        }
        const double tip_u = u[map.tip_displacement()];
        const double tip_ux = u[map.tip_rotation()];
        const double tip_ut = v[map.tip_displacement()];
        const double tip_uxt = v[map.tip_rotation()];

        const double e_val = 0.5 * (kinetic + bending) + 0.5 * k.k_r * tip_ux * tip_ux + 0.5 * k.k_d * tip_u * tip_u;
        const double j_val = cross + 0.5 * viscous + 0.5 * k.k_a * tip_ux * tip_ux + 0.5 * k.k_v * tip_u * tip_u;

        const double t = trace.grid.time(j);
        const double dt = t - prev_t;
        const double cur_a = k.k_a * tip_uxt * tip_uxt;
        const double cur_v = k.k_v * tip_ut * tip_ut;
        acc_mu += 0.5 * dt * (prev_mu + dissipation);
        acc_a += 0.5 * dt * (prev_a + cur_a);
        acc_v += 0.5 * dt * (prev_v + cur_v);
        prev_mu = dissipation;
        prev_a = cur_a;
        prev_v = cur_v;
        prev_t = t;

        out.times.push_back(t);
        out.E.push_back(e_val);
        out.J.push_back(j_val);
        if (lambda) out.L.push_back(e_val + *lambda * j_val);
        out.j_mu.push_back(acc_mu);
        out.j_a.push_back(acc_a);
        out.j_v.push_back(acc_v);
        out.residual.push_back(out.E0 - e_val - (acc_mu + acc_a + acc_v));
        out.tip_velocity_sq.push_back(tip_ut * tip_ut);
        out.tip_angular_velocity_sq.push_back(tip_uxt * tip_uxt);
        out.velocity_l2_sq.push_back(speed);
    }
    return out;
}

double identity_residual(const EnergyTrace& energy) {
    if (energy.forced) {
        throw DomainError(
            "energy identity holds only for homogeneous end conditions; this trace has boundary forcing");
    }
    double worst = 0.0;
    for (double r : energy.residual) worst = std::max(worst, std::abs(r));
    return worst;
}

void write_energy_csv(std::ostream& out, const EnergyTrace& energy) {
    out << "t,E,J,L,j_mu,j_a,j_v,residual\n";
    out << std::setprecision(12);
    for (std::size_t i = 0; i < energy.times.size(); ++i) {
        out << energy.times[i] << ',' << energy.E[i] << ',' << energy.J[i] << ',';
        if (!energy.L.empty()) out << energy.L[i];
        out << ',' << energy.j_mu[i] << ',' << energy.j_a[i] << ',' << energy.j_v[i] << ',' << energy.residual[i]
            << '\n';
    }
}

}  // namespace beamstab
