#include "beamstab/banded.hpp"
#include "beamstab/errors.hpp"
#include "beamstab/fem.hpp"
#include "beamstab/quadrature.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace beamstab;

namespace {

BeamProblem unit_problem() {
    BeamProblem p;
    p.length = 1.0;
    p.rho = Profile::constant(1.0);
    p.r = Profile::constant(1.0);
    p.mu = Profile::zero();
    return p;
}

double max_difference(const BandedSymmetricMatrix& a, const std::vector<std::vector<double>>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) m = std::max(m, std::abs(a(i, j) - b[i][j]));
    }
    return m;
}

}  // namespace

TEST_CASE("Hermite shapes") {
    const auto at0 = hermite_shapes(0.0, 1.0);
    const auto at1 = hermite_shapes(1.0, 1.0);
    const auto mid = hermite_shapes(0.5, 1.0);
    const double expect0[] = {1, 0, 0, 0};
    const double expect1[] = {0, 0, 1, 0};
    const double expect_mid[] = {0.5, 0.125, 0.5, -0.125};
    for (int i = 0; i < 4; ++i) {
        CHECK(at0[i].value == doctest::Approx(expect0[i]));
        CHECK(at1[i].value == doctest::Approx(expect1[i]));
        CHECK(mid[i].value == doctest::Approx(expect_mid[i]));
    }
    // partition of unity of the value shapes, slopes carried by the h-scaled shapes
    for (double xi : {0.1, 0.37, 0.8}) {
        const auto s = hermite_shapes(xi, 0.25);
        CHECK(s[0].value + s[2].value == doctest::Approx(1.0));
        CHECK(s[0].dx + s[2].dx == doctest::Approx(0.0));
        const auto ref = oracle::hermite(xi);
        for (int i = 0; i < 4; ++i) {
            const double scale = (i % 2 == 1) ? 0.25 : 1.0;
            CHECK(s[i].value == doctest::Approx(scale * ref[i][0]));
            CHECK(s[i].dx == doctest::Approx(scale * ref[i][1] / 0.25));
            CHECK(s[i].dxx == doctest::Approx(scale * ref[i][2] / 0.0625));
        }
    }
}

TEST_CASE("element matrices match the 50-point oracle") {
    const BeamProblem p = unit_problem();
    const ElementMatrices m = element_matrices(p, 0.0, 1.0, gauss_legendre(4));
    const double mass_row[] = {13.0 / 35.0, 11.0 / 210.0, 9.0 / 70.0, -13.0 / 420.0};
    const double stiff_row[] = {12.0, 6.0, -12.0, 6.0};
    for (int j = 0; j < 4; ++j) {
        CHECK(std::abs(m.mass[0][j] - mass_row[j]) <= 1e-12);
        CHECK(std::abs(m.stiffness[0][j] - stiff_row[j]) <= 1e-12);
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double mo = oracle::integrate([&](double s) { return oracle::hermite(s)[i][0] * oracle::hermite(s)[j][0]; }, 0.0, 1.0);
            const double ko = oracle::integrate([&](double s) { return oracle::hermite(s)[i][2] * oracle::hermite(s)[j][2]; }, 0.0, 1.0);
            CHECK(std::abs(m.mass[i][j] - mo) <= 1e-12);
            CHECK(std::abs(m.stiffness[i][j] - ko) <= 1e-12);
            CHECK(m.damping[i][j] == 0.0);
        }
    }
}

TEST_CASE("banded assembly equals a dense naive assembly") {
    std::vector<BeamProblem> problems{preset("test_NE1"), preset("cantilever_spring"), preset("cantilever_dampers")};
    BeamProblem varying = preset("cantilever_dampers");
    varying.length = 1.3;
    varying.rho = Profile::polynomial({1.0, 0.5, -0.2, 0.1});
    varying.r = Profile::table({0.0, 0.41, 0.9, 1.3}, {2.0, 1.0, 1.5, 1.2});
    varying.mu = Profile::table({0.0, 0.65, 1.3}, {0.0, 1.0, 0.25});
    problems.push_back(varying);
    for (const BeamProblem& p : problems) {
        for (std::size_t nodes : {3u, 6u, 11u}) {
            const SemiDiscreteSystem s = assemble(p, Mesh(p.length, nodes));
            const oracle::DenseSystem d = oracle::dense_assembly(p, nodes);
            CHECK(max_difference(s.mass(), d.mass) <= 1e-12 * std::max(1.0, oracle::max_abs(d.mass)));
            CHECK(max_difference(s.damping(), d.damping) <= 1e-12 * std::max(1.0, oracle::max_abs(d.damping)));
            CHECK(max_difference(s.stiffness(), d.stiffness) <= 1e-12 * std::max(1.0, oracle::max_abs(d.stiffness)));
        }
    }
}

TEST_CASE("end springs and dampers enter the tip diagonals") {
    BeamProblem ne1 = preset("test_NE1");
    BeamProblem bare = ne1;
    bare.boundary = {};
    const Mesh mesh(1.0, 9);
    const SemiDiscreteSystem a = assemble(ne1, mesh);
    const SemiDiscreteSystem b = assemble(bare, mesh);
    const DofMap map = a.dof_map();
    const std::size_t w = map.tip_displacement();
    const std::size_t t = map.tip_rotation();
    CHECK(a.stiffness()(w, w) - b.stiffness()(w, w) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(a.damping()(w, w) - b.damping()(w, w) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(a.stiffness()(t, t) - b.stiffness()(t, t) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(a.damping()(t, t) - b.damping()(t, t) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(a.stiffness()(w, t) == b.stiffness()(w, t));
}

TEST_CASE("quadrature: 4 and 10 points agree for constant coefficients") {
    const BeamProblem p = preset("cantilever_spring");
    const Mesh mesh(1.0, 13);
    const SemiDiscreteSystem four = assemble(p, mesh, 4);
    const SemiDiscreteSystem ten = assemble(p, mesh, 10);
    CHECK(max_difference(four.mass(), ten.mass().dense()) <= 1e-12);
    CHECK(max_difference(four.stiffness(), ten.stiffness().dense()) <= 1e-12 * oracle::max_abs(ten.stiffness().dense()));
    CHECK_THROWS_AS(assemble(p, mesh, 3), DomainError);

    BeamProblem quintic = p;
    quintic.r = Profile::polynomial({1.0, 0.0, 0.0, 0.0, 0.0, 0.5});
    CHECK(required_quad_points(quintic, 4) == 6);
    CHECK(required_quad_points(p, 4) == 4);
    CHECK(required_quad_points(p, 7) == 7);
}

TEST_CASE("matrix definiteness") {
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    for (const std::string& name : preset_names()) {
        CAPTURE(name);
        const SemiDiscreteSystem s = assemble(preset(name), Mesh(1.0, 21));
        const std::size_t n = s.size();
        // smallest eigenvalue of M by inverse power iteration
        const BandedCholesky chol(s.mass());
        std::vector<double> x(n, 1.0);
        double lambda_min = 0.0;
        for (int it = 0; it < 30; ++it) {
            std::vector<double> y = chol.solve(x);
            double norm = 0.0;
            for (double v : y) norm += v * v;
            norm = std::sqrt(norm);
            for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
            lambda_min = s.mass().quadratic_form(x);
        }
        CHECK(lambda_min > 0.0);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> v(n);
            for (double& e : v) e = g(rng);
            CHECK(s.damping().quadratic_form(v) >= 0.0);
            CHECK(s.stiffness().quadratic_form(v) > 0.0);
        }
        const auto dense = s.stiffness().dense();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(dense[i][j] == dense[j][i]);
                if (i > j + 3) CHECK(dense[i][j] == 0.0);
            }
        }
    }
}

TEST_CASE("interpolation reproduces clamped cubics") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (std::size_t nodes : {3u, 4u, 17u, 64u}) {
        const Mesh mesh(1.0, nodes);
        for (int trial = 0; trial < 5; ++trial) {
            const double a = u(rng);
            const double b = u(rng);
            const Profile f = Profile::polynomial({0.0, 0.0, a, b});
            const std::vector<double> dofs = interpolate_nodal(mesh, f);
            for (double x : {0.0, 0.013, 0.3, 0.5, 0.77, 1.0}) {
                const FieldValue v = evaluate_solution(mesh, dofs, x);
                CHECK(std::abs(v.u - f.value(x)) <= 1e-10);
                CHECK(std::abs(v.ux - f.derivative(x, 1)) <= 1e-10);
                CHECK(std::abs(v.uxx - f.derivative(x, 2)) <= 1e-10);
            }
        }
    }
    const Mesh mesh(1.0, 41);
    const auto ne1 = interpolate_nodal(mesh, preset("test_NE1").initial.displacement);
    const FieldValue tip = evaluate_solution(mesh, ne1, 1.0);
    CHECK(tip.u == doctest::Approx(1.0));
    CHECK(tip.ux == doctest::Approx(2.0));
    const FieldValue zero = evaluate_solution(mesh, std::vector<double>(80, 0.0), 0.42);
    CHECK(zero.u == 0.0);
    CHECK(zero.ux == 0.0);
    CHECK(zero.uxx == 0.0);
    CHECK_THROWS_AS(evaluate_solution(mesh, ne1, 1.5), DomainError);
    CHECK_THROWS_AS(evaluate_solution(mesh, ne1, -0.1), DomainError);
}

TEST_CASE("curvature at interior nodes is the left-element limit") {
    const Mesh mesh(1.0, 3);
    // u = x^3 on the left element only: slopes chosen so the curvature jumps at x = 0.5
    std::vector<double> dofs{0.125, 0.75, 0.25, 0.5};
    const FieldValue at_node = evaluate_solution(mesh, dofs, 0.5);
    const FieldValue left = evaluate_solution(mesh, dofs, 0.5 - 1e-9);
    const FieldValue right = evaluate_solution(mesh, dofs, 0.5 + 1e-9);
    CHECK(at_node.uxx == doctest::Approx(left.uxx).epsilon(1e-6));
    CHECK(std::abs(left.uxx - right.uxx) > 1e-3);
    CHECK(mesh.locate(0.5) == 0);
    CHECK(mesh.locate(0.0) == 0);
    CHECK(mesh.locate(1.0) == 1);
}

TEST_CASE("mesh and dof map") {
    const Mesh mesh(2.0, 5);
    CHECK(mesh.spacing() == 0.5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(mesh.node(i) == doctest::Approx(0.5 * i).epsilon(1e-12));
    CHECK_THROWS_AS(Mesh(1.0, 2), DomainError);
    const DofMap map{5};
    CHECK(map.free_count() == 8);
    CHECK_FALSE(map.displacement(0).has_value());
    CHECK(*map.displacement(1) == 0);
    CHECK(*map.rotation(4) == 7);
    const auto e0 = map.element(0);
    CHECK_FALSE(e0[0].has_value());
    CHECK(*e0[2] == 0);
}

TEST_CASE("banded Cholesky agrees with dense elimination") {
    const SemiDiscreteSystem s = assemble(preset("test_NE1"), Mesh(1.0, 15));
    const BandedSymmetricMatrix a = s.mass().combined(1e4, s.stiffness(), 1.0);
    std::vector<double> rhs(a.dimension());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = std::sin(1.0 + static_cast<double>(i));
    const auto x = BandedCholesky(a).solve(rhs);
    const auto y = oracle::dense_solve(a.dense(), rhs);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-10));
    BandedSymmetricMatrix indefinite(3, 1);
    indefinite.add(0, 0, 1.0);
    indefinite.add(1, 1, -1.0);
    indefinite.add(2, 2, 1.0);
    CHECK_THROWS_AS(BandedCholesky{indefinite}, NumericalError);
    CHECK_THROWS(indefinite.add(2, 0, 1.0));
}

TEST_CASE("MatrixMarket dump") {
    BandedSymmetricMatrix a(2, 1);
    a.add(0, 0, 2.0);
    a.add(1, 0, -1.0);
    a.add(1, 1, 3.0);
    std::ostringstream os;
    a.write_matrix_market(os);
    const std::string text = os.str();
    CHECK(text.rfind("%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n", 0) == 0);
    CHECK(text.find("2 1 -1") != std::string::npos);
}

TEST_CASE("load vector carries the end forcing") {
    const SemiDiscreteSystem s = assemble(preset("test_NE1"), Mesh(1.0, 5));
    const auto f = s.load(0.5);
    const DofMap map = s.dof_map();
    CHECK(f[map.tip_displacement()] == doctest::Approx(-2.0 * std::exp(-1.0)));
    CHECK(f[map.tip_rotation()] == doctest::Approx(4.0 * std::exp(-1.0)));
    for (std::size_t i = 0; i + 2 < f.size(); ++i) CHECK(f[i] == 0.0);
}
