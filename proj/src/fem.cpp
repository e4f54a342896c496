#include "beamstab/fem.hpp"

#include "beamstab/errors.hpp"
#include "beamstab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace beamstab {

Mesh::Mesh(double length, std::size_t node_count) {
    if (node_count < 3) throw DomainError("mesh needs at least 3 nodes");
    if (!(length > 0.0)) throw DomainError("mesh length must be positive");
    const auto elements = static_cast<double>(node_count - 1);
    h_ = length / elements;
    nodes_.resize(node_count);
    for (std::size_t i = 0; i < node_count; ++i) nodes_[i] = length * static_cast<double>(i) / elements;
    nodes_.back() = length;
}

std::size_t Mesh::locate(double x) const {
    if (!(x >= 0.0 && x <= nodes_.back())) throw DomainError("x = " + std::to_string(x) + " outside [0, l]");
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    const auto k = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
    return k == 0 ? 0 : std::min(k - 1, element_count() - 1);
}

std::optional<std::size_t> DofMap::displacement(std::size_t node) const {
    if (node == 0) return std::nullopt;
    return 2 * (node - 1);
}

std::optional<std::size_t> DofMap::rotation(std::size_t node) const {
    if (node == 0) return std::nullopt;
    return 2 * (node - 1) + 1;
}

std::array<std::optional<std::size_t>, 4> DofMap::element(std::size_t e) const {
    return {displacement(e), rotation(e), displacement(e + 1), rotation(e + 1)};
}

std::array<ShapeValue, 4> hermite_shapes(double xi, double h) {
    const double x2 = xi * xi;
    const double x3 = x2 * xi;
    const double ih = 1.0 / h;
    const double ih2 = ih * ih;
    return {{
        {1.0 - 3.0 * x2 + 2.0 * x3, (-6.0 * xi + 6.0 * x2) * ih, (-6.0 + 12.0 * xi) * ih2},
        {h * (xi - 2.0 * x2 + x3), 1.0 - 4.0 * xi + 3.0 * x2, (-4.0 + 6.0 * xi) * ih},
        {3.0 * x2 - 2.0 * x3, (6.0 * xi - 6.0 * x2) * ih, (6.0 - 12.0 * xi) * ih2},
        {h * (-x2 + x3), -2.0 * xi + 3.0 * x2, (-2.0 + 6.0 * xi) * ih},
    }};
}

SemiDiscreteSystem::SemiDiscreteSystem(Mesh mesh, BandedSymmetricMatrix mass, BandedSymmetricMatrix damping,
                                       BandedSymmetricMatrix stiffness, BoundaryForcing forcing,
                                       std::size_t quad_points)
    : mesh_(std::move(mesh)),
      mass_(std::move(mass)),
      damping_(std::move(damping)),
      stiffness_(std::move(stiffness)),
      forcing_(std::move(forcing)),
      quad_points_(quad_points) {}

std::vector<double> SemiDiscreteSystem::load(double t) const {
    std::vector<double> f(size(), 0.0);
    const DofMap dofs = dof_map();
    f[dofs.tip_displacement()] = -forcing_.shear.value(t);
    f[dofs.tip_rotation()] = -forcing_.moment.value(t);
    return f;
}

std::size_t required_quad_points(const BeamProblem& problem, std::size_t requested) {
    std::size_t q = std::max<std::size_t>(requested, 4);
    for (const Profile* c : {&problem.rho, &problem.mu, &problem.r}) {
        const int deg = std::max(c->degree(), 0);
        q = std::max<std::size_t>(q, static_cast<std::size_t>((6 + deg + 1) / 2));
    }
    return q;
}

ElementMatrices element_matrices(const BeamProblem& problem, double x0, double h, const QuadratureRule& rule,
                                 std::span<const double> breakpoints) {
    ElementMatrices m{};
    for_each_piece(x0, x0 + h, breakpoints, [&](double a, double b) {
        for (std::size_t g = 0; g < rule.size(); ++g) {
            const double x = a + (b - a) * rule.points[g];
            const double w = (b - a) * rule.weights[g];
            const auto s = hermite_shapes((x - x0) / h, h);
            const double rho = problem.rho.value(x);
            const double mu = problem.mu.value(x);
            const double r = problem.r.value(x);
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t j = 0; j <= i; ++j) {
                    const double nn = w * s[i].value * s[j].value;
                    m.mass[i][j] += rho * nn;
                    m.damping[i][j] += mu * nn;
                    m.stiffness[i][j] += w * r * s[i].dxx * s[j].dxx;
                }
            }
        }
    });
    for (auto* block : {&m.mass, &m.damping, &m.stiffness}) {
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = i + 1; j < 4; ++j) (*block)[i][j] = (*block)[j][i];
        }
    }
    return m;
}

SemiDiscreteSystem assemble(const BeamProblem& problem, const Mesh& mesh, std::size_t quad_points) {
    if (quad_points < 4) throw DomainError("assembly needs at least 4 quadrature points per element");
    const std::size_t q = required_quad_points(problem, quad_points);
    const QuadratureRule& rule = gauss_legendre(q);
    const DofMap map{mesh.node_count()};
    const std::size_t n = map.free_count();
    constexpr std::size_t bandwidth = 3;
    BandedSymmetricMatrix mass(n, bandwidth);
    BandedSymmetricMatrix damping(n, bandwidth);
    BandedSymmetricMatrix stiffness(n, bandwidth);

    std::vector<double> breaks;
    for (const Profile* c : {&problem.rho, &problem.mu, &problem.r}) {
        const auto b = c->breakpoints(0.0, mesh.length());
        breaks.insert(breaks.end(), b.begin(), b.end());
    }
    std::sort(breaks.begin(), breaks.end());

    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const ElementMatrices local = element_matrices(problem, mesh.node(e), mesh.spacing(), rule, breaks);
        const auto& me = local.mass;
        const auto& ce = local.damping;
        const auto& ke = local.stiffness;
        const auto global = map.element(e);
        for (std::size_t i = 0; i < 4; ++i) {
            if (!global[i]) continue;
            for (std::size_t j = 0; j <= i; ++j) {
                if (!global[j]) continue;
                mass.add(*global[i], *global[j], me[i][j]);
                damping.add(*global[i], *global[j], ce[i][j]);
                stiffness.add(*global[i], *global[j], ke[i][j]);
            }
        }
    }

    const BoundaryParams& k = problem.boundary;
    stiffness.add(map.tip_displacement(), map.tip_displacement(), k.k_d);
    stiffness.add(map.tip_rotation(), map.tip_rotation(), k.k_r);
    damping.add(map.tip_displacement(), map.tip_displacement(), k.k_v);
    damping.add(map.tip_rotation(), map.tip_rotation(), k.k_a);

    return SemiDiscreteSystem(mesh, std::move(mass), std::move(damping), std::move(stiffness), problem.forcing, q);
}

FieldValue evaluate_solution(const Mesh& mesh, std::span<const double> dofs, double x) {
    const DofMap map{mesh.node_count()};
    if (dofs.size() != map.free_count()) throw DomainError("DOF vector has wrong length");
    const std::size_t e = mesh.locate(x);
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

FieldValue evaluate_solution(const SemiDiscreteSystem& system, std::span<const double> dofs, double x) {
    return evaluate_solution(system.mesh(), dofs, x);
}

std::vector<double> interpolate_nodal(const Mesh& mesh, const Profile& f) {
    const DofMap map{mesh.node_count()};
    std::vector<double> dofs(map.free_count(), 0.0);
    for (std::size_t i = 1; i < mesh.node_count(); ++i) {
        dofs[*map.displacement(i)] = f.value(mesh.node(i));
        dofs[*map.rotation(i)] = f.derivative(mesh.node(i), 1);
    }
    return dofs;
}

}  // namespace beamstab
