#include "beamstab/bounds.hpp"
#include "beamstab/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace beamstab;

namespace {

EnergyTrace reference_energy(const BeamProblem& p, CurvatureMode mode = CurvatureMode::paper) {
    const Mesh mesh(p.length, 41);
    return energy(run(p, mesh, TimeGrid::from_step(p.final_time, mesh.spacing() / 40.0)), mode);
}

}  // namespace

TEST_CASE("beta constants") {
    const BetaConstants ne1 = beta_constants(preset("test_NE1"));
    CHECK(ne1.beta0 == 0.5);
    CHECK(ne1.beta1 == 5.0);
    CHECK(ne1.regime == Regime::theorem1);

    BeamProblem undamped = preset("cantilever_free");
    undamped.mu = Profile::zero();
    const BetaConstants flat = beta_constants(undamped);
    CHECK(flat.beta0 == 0.5);
    CHECK(flat.beta1 == 0.5);

    const BetaConstants free = beta_constants(preset("cantilever_free"));
    CHECK(free.beta1 == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(free.regime == Regime::theorem1_special_4_1);
}

TEST_CASE("beta1 >= beta0, equal only without damping") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        BeamProblem p = preset("cantilever_dampers");
        p.length = 0.2 + u(rng);
        p.rho = Profile::constant(0.1 + u(rng));
        p.r = Profile::polynomial({0.1 + u(rng), u(rng)});
        const bool quiet = trial % 4 == 0;
        p.mu = quiet ? Profile::zero() : Profile::constant(u(rng));
        p.boundary = {u(rng), quiet ? 0.0 : u(rng), u(rng), quiet ? 0.0 : u(rng)};
        const BetaConstants b = beta_constants(p);
        CHECK(b.beta1 >= b.beta0);
        if (quiet) CHECK(b.beta1 == b.beta0);
        if (!quiet && p.boundary.k_a + p.boundary.k_v > 0.0) CHECK(b.beta1 > b.beta0);
    }
}

TEST_CASE("penalty window, theorem 1") {
    const LambdaWindow w = lambda_window(preset("test_NE1"));
    CHECK(w.lambda_max == 1.0);
    CHECK(w.regime == Regime::theorem1);
    BeamProblem undamped = preset("cantilever_spring");
    undamped.mu = Profile::zero();
    CHECK_THROWS_WITH_AS(lambda_window(undamped), doctest::Contains("k_a + k_v + mu0 > 0"), NoAdmissiblePenalty);
    CHECK_THROWS_AS(lambda_window(preset("mast_constant")), NoAdmissiblePenalty);
}

TEST_CASE("decay estimate") {
    const DecayConstants limit = decay_estimate(0.5, 5.0, 1.0 - 1e-8);
    CHECK(std::abs(limit.M_d / 12.0 - 1.0) <= 1e-6);
    CHECK(std::abs(limit.sigma * 3.0 - 1.0) <= 1e-6);
    const DecayConstants small = decay_estimate(0.5, 5.0, 1e-9);
    CHECK(small.M_d == doctest::Approx(1.0));
    CHECK(small.sigma == doctest::Approx(0.0));
    const DecayConstants half = decay_estimate(0.5, 5.0, 0.5);
    CHECK(half.M_d == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
    CHECK(half.sigma == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
    CHECK_THROWS_AS(decay_estimate(0.5, 5.0, 2.0), DomainError);
    CHECK_THROWS_AS(decay_estimate(0.5, 5.0, 0.0), DomainError);
}

TEST_CASE("decay estimate properties") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.01, 4.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double b0 = u(rng);
        const double b1 = b0 + u(rng);
        const double lambda = std::uniform_real_distribution<double>(1e-6, 1.0 / b0)(rng) * 0.999;
        const DecayConstants c = decay_estimate(b0, b1, lambda);
        CHECK(c.M_d > 1.0);
        CHECK(c.sigma < 2.0 / b1);
        const DecayConstants scaled = decay_estimate(2.0 * b0, 2.0 * b1, 0.5 * lambda);
        CHECK(scaled.M_d == doctest::Approx(c.M_d).epsilon(1e-13));
        CHECK(scaled.sigma * 2.0 == doctest::Approx(c.sigma).epsilon(1e-13));
    }
}

TEST_CASE("lambda scan") {
    const auto rows = scan_lambda(0.5, 5.0, 1.0, 9);
    REQUIRE(rows.size() == 9);
    CHECK(rows.front().lambda > 0.0);
    CHECK(rows.back().lambda < 1.0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].sigma > rows[i - 1].sigma);
        CHECK(rows[i].M_d > rows[i - 1].M_d);
    }
    const ScanRow& mid = rows[4];
    CHECK(mid.lambda == 0.5);
    CHECK(mid.M_d == doctest::Approx(14.0 / 3.0));
    CHECK(mid.sigma == doctest::Approx(2.0 / 7.0));
    CHECK_THROWS_AS(scan_lambda(0.5, 5.0, 1.0, 1), DomainError);
}

TEST_CASE("NE1 envelopes hold") {
    const BeamProblem ne1 = preset("test_NE1");
    const EnergyTrace e = reference_energy(ne1);
    const DecayBound b = decay_bound(ne1, &e);
    CHECK(b.lambda == doctest::Approx(0.99));
    const EnvelopeReport r = verify_envelopes(e, b);
    CHECK(r.informational);
    CHECK(r.violations() == 0);
    for (const EnvelopeCheck& c : r.checks) CHECK(c.worst_margin >= 0.0);
    CHECK_THROWS_AS(decay_bound(ne1, &e, 1.0), DomainError);
    const nlohmann::json j = to_json(b);
    for (const char* key : {"beta0", "beta1", "lambda_max", "lambda", "M_d", "sigma", "regime", "scan"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["regime"] == "theorem1");
}

TEST_CASE("every damped preset meets its envelopes") {
    for (const std::string& name : {"cantilever_free", "cantilever_spring", "cantilever_dampers", "mast_constant"}) {
        CAPTURE(name);
        const BeamProblem p = preset(name);
        const EnergyTrace e = reference_energy(p);
        const DecayBound b = decay_bound(p, &e);
        const EnvelopeReport r = verify_envelopes(e, b);
        CHECK_FALSE(r.informational);
        CHECK(r.violations() == 0);
    }
}

TEST_CASE("rest state satisfies the envelopes trivially") {
    BeamProblem p = preset("cantilever_spring");
    p.initial = {Profile::zero(), Profile::zero()};
    const EnergyTrace e = energy(run(p, Mesh(1.0, 11), TimeGrid(1.0, 40)));
    const EnvelopeReport r = verify_envelopes(e, decay_bound(p, &e));
    CHECK(r.violations() == 0);
}

TEST_CASE("theorem 2 window recomputed from the trace") {
    const BeamProblem mast = preset("mast_constant");
    const Mesh mesh(1.0, 41);
    const SolutionTrace trace = run(mast, mesh, TimeGrid::from_step(mast.final_time, mesh.spacing() / 40.0));
    const EnergyTrace e = energy(trace);
    const DecayBound b = decay_bound(mast, &e);
    CHECK(b.regime == Regime::theorem2);

    // independent route: tip quotients from the DOFs, ||u_t||^2 = v^T M v (rho = 1)
    const SemiDiscreteSystem& s = *trace.system;
    const DofMap map = s.dof_map();
    const double h = trace.grid.step();
    const Profile& u1 = mast.initial.velocity;
    double inf_feedback = u1.derivative(1.0, 1) * u1.derivative(1.0, 1) + u1.value(1.0) * u1.value(1.0);
    double sup_velocity = oracle::integrate([&](double x) { return u1.value(x) * u1.value(x); }, 0.0, 1.0, {0.5});
    for (std::size_t j = 1; j + 1 < trace.grid.size(); ++j) {
        std::vector<double> v(s.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (trace.dofs[j + 1][i] - trace.dofs[j - 1][i]) / (2.0 * h);
        const double ut = v[map.tip_displacement()];
        const double uxt = v[map.tip_rotation()];
        inf_feedback = std::min(inf_feedback, ut * ut + uxt * uxt);  // k_a = k_v = 1
        sup_velocity = std::max(sup_velocity, s.mass().quadratic_form(v));
    }
    const double expected = std::min(1.0 / b.beta0, inf_feedback / (2.0 * sup_velocity));
    CHECK(b.lambda_max == doctest::Approx(expected).epsilon(1e-10));
    CHECK(b.lambda_max > 0.0);

    const EnergyTrace again = energy(run(mast, mesh, TimeGrid::from_step(mast.final_time, mesh.spacing() / 40.0)));
    CHECK(decay_bound(mast, &again).lambda_max == b.lambda_max);
    const nlohmann::json j = to_json(b);
    CHECK(j["regime"] == "theorem2");
    CHECK(j.contains("window"));
}

TEST_CASE("theorem 2 refuses a vanishing boundary velocity") {
    BeamProblem mast = preset("mast_constant");
    mast.initial = {Profile::zero(), Profile::zero()};
    const EnergyTrace e = energy(run(mast, Mesh(1.0, 11), TimeGrid(1.0, 40)));
    CHECK_THROWS_WITH_AS(decay_bound(mast, &e), doctest::Contains("fails at t = 0"), NoAdmissiblePenalty);
}
