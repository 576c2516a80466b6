#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "squelp/bracket.hpp"

using namespace squelp;

namespace {

Term power(double coeff, double s_exp) {
    Term t;
    t.coeff = coeff;
    t.s_exp = s_exp;
    return t;
}

// -u'' + lambda u = r(u) on an interval, assembled by hand for the check tests
ScalarProblem interval_problem(std::size_t n, BoundaryKind bc, double lambda,
                               std::vector<Term> terms) {
    ScalarProblem prob;
    prob.grid = build_interval_grid(0.0, 1.0, n);
    prob.op.kind = OperatorKind::PureR;
    prob.op.p = 2.0;
    prob.op.lambda = lambda;
    prob.op.bc = bc;
    prob.reaction.terms = std::move(terms);
    return prob;
}

ScalarProblem singular_problem(std::size_t n, BoundaryKind bc, double lambda) {
    ScalarProblem prob = interval_problem(n, bc, lambda, {power(1.0, -0.5)});
    prob.reaction.meta = {true, true, 1.0, 0.5};
    return prob;
}

} // namespace

TEST_CASE("constant level against an affine reaction") {
    // r(s) = 1 - s with unit potential: residual of the level c is 2c - 1
    const ScalarProblem prob =
        interval_problem(16, BoundaryKind::Neumann, 1.0, {power(1.0, 0.0), power(-1.0, 1.0)});

    const Bracket b = constant_subsolution(prob, 0.5);
    CHECK(b.tag == BracketTag::Constant);
    CHECK(b.level == 0.5);
    for (std::size_t i = 0; i < b.sub.size(); ++i) CHECK(b.sub[i] == 0.5);
    const ResidualCheck chk = subsolution_check(prob, b.sub);
    CHECK(chk.ok);
    CHECK(std::abs(chk.margin) <= 1e-10);

    try {
        constant_subsolution(prob, 2.0);
        FAIL("level 2 must be rejected");
    } catch (const NotASubsolution& e) {
        CHECK(e.margin == doctest::Approx(3.0)); // 2*2 - 1
    }

    // on the supersolution side the same algebra flips: 2M - 1 >= 0
    CHECK(constant_supersolution_level(prob, 1.0) == 1.0);
    CHECK(constant_supersolution_level(prob, 0.3) == doctest::Approx(0.6));
    const ResidualCheck sup = supersolution_check(prob, Field(prob.grid, 0.6));
    CHECK(sup.ok);
}

TEST_CASE("constant level under a singular reaction") {
    const ScalarProblem prob = singular_problem(16, BoundaryKind::Neumann, 1.0);
    const Bracket b = constant_subsolution(prob, 0.1);
    const ResidualCheck chk = subsolution_check(prob, b.sub);
    CHECK(chk.ok);
    // residual of the level: c - c^{-1/2}
    CHECK(chk.margin == doctest::Approx(0.1 - std::pow(0.1, -0.5)));
}

TEST_CASE("builders reject the wrong boundary kinds and levels") {
    const ScalarProblem neumann =
        interval_problem(8, BoundaryKind::Neumann, 1.0, {power(1.0, 0.0)});
    ScalarProblem dirichlet = interval_problem(8, BoundaryKind::Dirichlet, 0.0, {});
    dirichlet.forcing = [](Vec) { return 200.0; };

    CHECK_THROWS_AS(constant_subsolution(dirichlet, 0.5), ValidationError);
    CHECK_THROWS_AS(constant_subsolution(neumann, -1.0), ValidationError);
    CHECK_THROWS_AS(distance_subsolution(neumann, 1.0), ValidationError);
    CHECK_THROWS_AS(distance_subsolution(dirichlet, 0.0), ValidationError);
}

TEST_CASE("distance profile under strong forcing, one dimension") {
    ScalarProblem prob = interval_problem(64, BoundaryKind::Dirichlet, 0.0, {});
    prob.forcing = [](Vec) { return 200.0; };

    const Bracket b = distance_subsolution(prob, 1.0);
    CHECK(b.tag == BracketTag::DistanceBased);
    CHECK(b.k == 1.0); // accepted without shrinking
    const Grid& g = *prob.grid;
    for (std::size_t i = 0; i < g.node_count(); ++i)
        CHECK(b.sub[i] == doctest::Approx(std::min(g.node[i].x, 1.0 - g.node[i].x)));

    // worst residual sits at the apex: the tent kink contributes 2k/h = 128
    // against the forcing 200
    const ResidualCheck chk = subsolution_check(prob, b.sub);
    CHECK(chk.ok);
    CHECK(chk.margin == doctest::Approx(-72.0));
}

TEST_CASE("distance profile in two dimensions") {
    ScalarProblem prob;
    prob.grid = build_rectangle_grid({0.0, 0.0}, {1.0, 1.0}, 8, 8);
    prob.op.p = 2.0;
    prob.op.bc = BoundaryKind::Dirichlet;
    prob.forcing = [](Vec) { return 1000.0; };

    const Bracket b = distance_subsolution(prob, 2.0);
    CHECK(b.k == 2.0);
    const Grid& g = *prob.grid;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        CHECK(b.sub[i] == doctest::Approx(2.0 * g.dist_boundary[i]));
        if (g.node[i].x == 0.5 && g.node[i].y == 0.5) CHECK(b.sub[i] == 1.0);
    }
    CHECK(subsolution_check(prob, b.sub).ok);
}

TEST_CASE("slope halving against a singular reaction") {
    // -u'' = (u)^{-1/2}: a small tent works because the singular right side
    // blows up faster than the kink penalty as k shrinks
    const ScalarProblem prob = singular_problem(64, BoundaryKind::Dirichlet, 0.0);

    const Bracket small = distance_subsolution(prob, 1e-3);
    CHECK(small.k == doctest::Approx(1e-3));
    CHECK(subsolution_check(prob, small.sub).ok);

    // from k = 1 the builder halves until the apex balance 128 k <= (k/2)^{-1/2}
    // first holds, at k = 2^{-5}
    const Bracket shrunk = distance_subsolution(prob, 1.0);
    CHECK(shrunk.k == doctest::Approx(0.03125));
    CHECK(subsolution_check(prob, shrunk.sub).ok);
}

TEST_CASE("truncation floors at the subsolution") {
    GridPtr g = build_interval_grid(0.0, 1.0, 32);
    Bracket b;
    b.sub = Field(g, 0.5);

    Field u = Field::from_fn(g, [](Vec x) { return x.x; }); // crosses the floor at 0.5
    const Field t = truncate(u, b);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == std::max(u[i], 0.5));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        Field a(g), c(g);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = val(rng);
            c[i] = a[i] + std::abs(val(rng)); // c >= a nodewise
        }
        const Field ta = truncate(a, b), tc = truncate(c, b);
        const Field taa = truncate(ta, b);
        for (std::size_t i = 0; i < ta.size(); ++i) {
            CHECK(ta[i] >= b.sub[i]);
            CHECK(taa[i] == ta[i]);  // idempotent
            CHECK(tc[i] >= ta[i]);   // order preserving
        }
    }

    Field wrong(build_interval_grid(0.0, 1.0, 16));
    CHECK_THROWS_AS(truncate(wrong, b), Error);
}

TEST_CASE("summability ratios of singular weights") {
    const double gamma = 0.5, p = 2.0;
    auto dist_field = [](GridPtr g) {
        return Field::from_fn(g, [](Vec x) { return std::min(x.x, 1.0 - x.x); });
    };
    auto sine = [](GridPtr g, double scale) {
        return Field::from_fn(g, [scale](Vec x) { return scale * std::sin(M_PI * x.x); });
    };

    GridPtr g = build_interval_grid(0.0, 1.0, 128);
    const Field u = dist_field(g);
    const std::vector<Field> phis = {sine(g, 1.0), sine(g, 0.5), sine(g, 2.0), Field(g, 0.0)};
    const HardyCertificate cert = hardy_sobolev_check(u, gamma, p, phis, 0.5);

    REQUIRE(cert.entries.size() == 4);
    CHECK(cert.all_finite);
    CHECK(cert.entries[3].skipped); // identically zero test function

    // independent quadrature for int dist^{-1/2} sin(pi x) over the 400k-cell
    // midpoint rule; the gradient integral of sin is pi^2/2 exactly
    double num = 0.0;
    {
        const int n = 400000;
        const double h = 1.0 / n;
        for (int i = 0; i < n; ++i) {
            const double x = (i + 0.5) * h;
            num += std::pow(std::min(x, 1.0 - x), -gamma) * std::sin(M_PI * x) * h;
        }
    }
    const double den = M_PI * M_PI / 2.0;
    CHECK(cert.entries[0].numerator == doctest::Approx(num).epsilon(0.02));
    CHECK(cert.entries[0].denominator == doctest::Approx(den).epsilon(0.01));
    CHECK(cert.entries[0].ratio == doctest::Approx(num / den).epsilon(0.02));

    // scaling law: R(t phi) = t^{1-p} R(phi), exactly at the discrete level
    const double r0 = cert.entries[0].ratio;
    CHECK(cert.entries[1].ratio == doctest::Approx(2.0 * r0).epsilon(1e-12));
    CHECK(cert.entries[2].ratio == doctest::Approx(0.5 * r0).epsilon(1e-12));
    CHECK(cert.max_ratio == doctest::Approx(2.0 * r0).epsilon(1e-12));

    // the ratio is a discretization of a grid-independent quantity
    GridPtr g2 = build_interval_grid(0.0, 1.0, 256);
    const HardyCertificate fine =
        hardy_sobolev_check(dist_field(g2), gamma, p, {sine(g2, 1.0)}, 0.5);
    CHECK(fine.entries[0].ratio == doctest::Approx(r0).epsilon(0.05));

    // u must dominate k * dist; doubling the demanded slope breaks it
    CHECK_THROWS_AS(hardy_sobolev_check(u, gamma, p, {sine(g, 1.0)}, 2.0), Error);
    // test functions that carry boundary mass are rejected outright
    CHECK_THROWS_AS(hardy_sobolev_check(u, gamma, p, {Field(g, 1.0)}, 0.5), ValidationError);
}

TEST_CASE("componentwise constant system brackets") {
    SystemProblem prob;
    prob.grid = build_interval_grid(0.0, 1.0, 32);
    prob.op_u.p = 2.0;
    prob.op_u.lambda = 1.0;
    prob.op_u.bc = BoundaryKind::Neumann;
    prob.op_v = prob.op_u;
    prob.grad_cap = 6.0;

    ReactionSpec& spec = prob.reaction;
    spec.arity = Arity::System;
    Term f0 = power(1.0, -0.1);
    f0.mod = Modulator::SinS;
    f0.t_exp = 0.5;
    Term f1;
    f1.coeff = -1.0;
    f1.mod = Modulator::SinS;
    f1.xi1_exp = 0.2;
    Term f2 = f1;
    f2.xi1_exp = 0.0;
    f2.xi2_exp = 0.2;
    spec.terms = {f0, f1, f2};
    Term g0 = power(1.0, 0.6);
    g0.mod = Modulator::CosT;
    g0.t_exp = -0.1;
    Term g1;
    g1.coeff = -1.0;
    g1.mod = Modulator::CosT;
    g1.xi1_exp = 0.3;
    Term g2 = g1;
    g2.xi1_exp = 0.0;
    g2.xi2_exp = 0.3;
    spec.terms2 = {g0, g1, g2};
    spec.chain = {0.1, 0.5, 0.2, 0.2, 0.6, 0.1, 0.3, 0.3, NAN};

    const auto [bu, bv] = system_constant_brackets(prob, 0.5, 0.5, 1.0);
    CHECK(bu.level == 0.5);
    CHECK(bv.level == 0.5);
    REQUIRE(bu.super.has_value());
    REQUIRE(bv.super.has_value());
    // the frozen-residual sign at a constant reduces to the sign of the
    // reaction itself (the own-component power cancels), so the doubling
    // search must climb past the positive sin/cos humps: the first component
    // needs sin(M) <= 0 (M = 4), the second cos(M) <= 0 (M = 2)
    CHECK((*bu.super)[0] == 4.0);
    CHECK((*bv.super)[0] == 2.0);

    // all four sign conditions hold with the companion at either end
    CHECK(system_constant_check(prob, 0, 0.5, 0.5, false).ok);
    CHECK(system_constant_check(prob, 0, 0.5, 2.0, false).ok);
    CHECK(system_constant_check(prob, 1, 0.5, 4.0, false).ok);
    CHECK(system_constant_check(prob, 0, 4.0, 2.0, true).ok);
    CHECK(system_constant_check(prob, 1, 2.0, 4.0, true).ok);

    // c = 1 fails as a first-component supersolution: sin(1) > 0 leaves the
    // reaction pushing up, and the margin is exactly the reaction value
    const ResidualCheck rc = system_constant_check(prob, 0, 1.0, 0.5, true);
    CHECK_FALSE(rc.ok);
    CHECK(rc.margin == doctest::Approx(-std::sin(1.0) * std::sqrt(0.5)).epsilon(1e-10));

    // past the sin hump the first-component reaction turns negative, so the
    // level cannot be a subsolution
    CHECK_THROWS_AS(system_constant_brackets(prob, 3.2, 0.5, 4.0), NotASubsolution);
    CHECK_THROWS_AS(system_constant_brackets(prob, -0.5, 0.5, 1.0), ValidationError);
}
