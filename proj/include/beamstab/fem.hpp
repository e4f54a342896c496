#pragma once

#include "beamstab/banded.hpp"
#include "beamstab/problem.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace beamstab {

/// Uniform mesh 0 = x_0 < ... < x_{M-1} = l.
class Mesh {
public:
    Mesh(double length, std::size_t node_count);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t element_count() const { return nodes_.size() - 1; }
    double length() const { return nodes_.back(); }
    double spacing() const { return h_; }
    double node(std::size_t i) const { return nodes_[i]; }
    std::span<const double> nodes() const { return nodes_; }

    /// Element containing x; at an interior node the element to its left.
    std::size_t locate(double x) const;

private:
    double h_;
    std::vector<double> nodes_;
};

/// Node i carries a displacement and a rotation DOF. The clamped node 0 is
/// eliminated, so node i > 0 maps to free DOFs 2(i-1) and 2(i-1)+1.
struct DofMap {
    std::size_t node_count;

    std::size_t free_count() const { return 2 * (node_count - 1); }
    std::optional<std::size_t> displacement(std::size_t node) const;
    std::optional<std::size_t> rotation(std::size_t node) const;
    /// Global DOFs of element e in local order (w_e, theta_e, w_{e+1}, theta_{e+1}).
    std::array<std::optional<std::size_t>, 4> element(std::size_t e) const;
    std::size_t tip_displacement() const { return free_count() - 2; }
    std::size_t tip_rotation() const { return free_count() - 1; }
};

/// Value and first two x-derivatives of one shape function.
struct ShapeValue {
    double value;
    double dx;
    double dxx;
};

/// Cubic Hermite shapes at local coordinate xi in [0, 1] of an element of
/// length h. Rotation shapes carry the factor h, so rotation DOFs are slopes.
std::array<ShapeValue, 4> hermite_shapes(double xi, double h);

struct FieldValue {
    double u;
    double ux;
    double uxx;
};

/// Mass M, damping C and stiffness K of the semi-discrete system
///   M U'' + C U' + K U = load(t),
/// with the end springs in K and the end dampers in C.
class SemiDiscreteSystem {
public:
    SemiDiscreteSystem(Mesh mesh, BandedSymmetricMatrix mass, BandedSymmetricMatrix damping,
                       BandedSymmetricMatrix stiffness, BoundaryForcing forcing, std::size_t quad_points);

    const Mesh& mesh() const { return mesh_; }
    DofMap dof_map() const { return {mesh_.node_count()}; }
    std::size_t size() const { return mass_.dimension(); }
    const BandedSymmetricMatrix& mass() const { return mass_; }
    const BandedSymmetricMatrix& damping() const { return damping_; }
    const BandedSymmetricMatrix& stiffness() const { return stiffness_; }
    std::size_t quad_points() const { return quad_points_; }

    /// Boundary load at time t: -g_Q(t) on the tip displacement DOF and
    /// -g_M(t) on the tip rotation DOF, zero elsewhere.
    std::vector<double> load(double t) const;

private:
    Mesh mesh_;
    BandedSymmetricMatrix mass_;
    BandedSymmetricMatrix damping_;
    BandedSymmetricMatrix stiffness_;
    BoundaryForcing forcing_;
    std::size_t quad_points_;
};

/// Smallest admissible point count per element, at least 4 and enough to
/// integrate cubic x cubic x (polynomial coefficient) exactly.
std::size_t required_quad_points(const BeamProblem& problem, std::size_t requested);

struct QuadratureRule;

/// Local 4x4 matrices of one element [x0, x0 + h] in the DOF order
/// (w_0, theta_0, w_1, theta_1):
///   mass = int rho N_i N_j, damping = int mu N_i N_j, stiffness = int r N_i'' N_j''.
/// The element is split at the given coefficient breakpoints.
struct ElementMatrices {
    std::array<std::array<double, 4>, 4> mass;
    std::array<std::array<double, 4>, 4> damping;
    std::array<std::array<double, 4>, 4> stiffness;
};

ElementMatrices element_matrices(const BeamProblem& problem, double x0, double h, const QuadratureRule& rule,
                                 std::span<const double> breakpoints = {});

/// Galerkin assembly. quad_points < 4 is rejected.
SemiDiscreteSystem assemble(const BeamProblem& problem, const Mesh& mesh, std::size_t quad_points = 4);

/// u, u_x, u_xx of the finite element function with the given free DOFs.
FieldValue evaluate_solution(const Mesh& mesh, std::span<const double> dofs, double x);
FieldValue evaluate_solution(const SemiDiscreteSystem& system, std::span<const double> dofs, double x);

/// Nodal Hermite interpolant (value and slope at each free node).
std::vector<double> interpolate_nodal(const Mesh& mesh, const Profile& f);

/// Applies f(a, b, rule) to each sub-interval of [a, b] split at the given
/// breakpoints; used to integrate piecewise-polynomial integrands exactly.
template <class F>
void for_each_piece(double a, double b, std::span<const double> breakpoints, F&& f) {
    double left = a;
    for (double x : breakpoints) {
        if (x > left && x < b) {
            f(left, x);
            left = x;
        }
    }
    f(left, b);
}

}  // namespace beamstab
