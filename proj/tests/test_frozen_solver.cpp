#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "squelp/frozen_solver.hpp"

#include "oracle.hpp"

using namespace squelp;
using testing::ConstRhs;
using testing::cell_samples;
using testing::dense_reference;
using testing::make_problem;

namespace {

void check_against_dense(const ScalarProblem& prob, const std::vector<double>& cell_rhs) {
    const ScaledCellRhs rhs(cell_rhs);
    const Field ref = dense_reference(prob, cell_rhs);
    const SolveReport rep = solve_frozen_scalar(prob, rhs, nullptr, Field(prob.grid, 0.0));
    REQUIRE(rep.converged);
    CHECK(rep.iterations <= 2); // quadratic energy: one exact step
    CHECK(inf_dist(rep.solution, ref) <= 1e-10);
}

} // namespace

TEST_CASE("constant data reproduces the constant solution") {
    GridPtr g = build_interval_grid(0.0, 1.0, 32);
    const ScalarProblem prob = make_problem(g, BoundaryKind::Neumann, 1.0);
    const ConstRhs one(1.0);
    const SolveReport rep =
        solve_frozen_scalar(prob, one, nullptr, Field(g, 0.0));
    REQUIRE(rep.converged);
    CHECK(rep.iterations <= 2);
    for (std::size_t i = 0; i < rep.solution.size(); ++i)
        CHECK(rep.solution[i] == doctest::Approx(1.0).epsilon(1e-10));

    // cubic case: |u| u = 4 forces u = 2 once the flux term vanishes
    const ScalarProblem cubic = make_problem(g, BoundaryKind::Neumann, 1.0, 0.0, 3.0);
    const ConstRhs four(4.0);
    const SolveReport rc = solve_frozen_scalar(cubic, four, nullptr, Field(g, 0.5));
    REQUIRE(rc.converged);
    for (std::size_t i = 0; i < rc.solution.size(); ++i)
        CHECK(rc.solution[i] == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("quadratic solves match a dense LU reference") {
    SUBCASE("robin, one dimension") {
        ScalarProblem prob =
            make_problem(build_interval_grid(0.0, 1.0, 48), BoundaryKind::Robin, 0.3, 0.7);
        prob.boundary_data = [](Vec, Vec) { return 0.3; };
        check_against_dense(prob, cell_samples(*prob.grid, [](Vec x) {
                                return std::sin(2.0 * M_PI * x.x) + 2.0;
                            }));
    }
    SUBCASE("neumann, one dimension") {
        const ScalarProblem prob =
            make_problem(build_interval_grid(0.0, 1.0, 64), BoundaryKind::Neumann, 1.0);
        check_against_dense(prob, cell_samples(*prob.grid, [](Vec x) { return x.x * x.x + 1.0; }));
    }
    SUBCASE("dirichlet, one dimension") {
        const ScalarProblem prob =
            make_problem(build_interval_grid(0.0, 1.0, 32), BoundaryKind::Dirichlet, 0.0);
        check_against_dense(prob, cell_samples(*prob.grid, [](Vec x) { return std::exp(x.x); }));
        // eliminated nodes really stay on the zero trace
        const ScaledCellRhs rhs(cell_samples(*prob.grid, [](Vec x) { return std::exp(x.x); }));
        const SolveReport rep = solve_frozen_scalar(prob, rhs, nullptr, Field(prob.grid, 5.0));
        for (std::size_t id : prob.grid->boundary_node) CHECK(rep.solution[id] == 0.0);
    }
    SUBCASE("robin, two dimensions") {
        const ScalarProblem prob = make_problem(build_rectangle_grid({0, 0}, {1, 1}, 6, 6),
                                                BoundaryKind::Robin, 0.5, 1.0);
        check_against_dense(prob,
                            cell_samples(*prob.grid, [](Vec x) { return x.x + 2.0 * x.y + 1.0; }));
    }
}

TEST_CASE("warm start from the solution costs zero iterations") {
    GridPtr g = build_interval_grid(0.0, 1.0, 40);
    const ScalarProblem prob = make_problem(g, BoundaryKind::Neumann, 1.0);
    const ScaledCellRhs rhs(cell_samples(*g, [](Vec x) { return std::cos(x.x) + 1.5; }));
    const SolveReport first = solve_frozen_scalar(prob, rhs, nullptr, Field(g, 0.0));
    REQUIRE(first.converged);
    const SolveReport again = solve_frozen_scalar(prob, rhs, nullptr, first.solution);
    CHECK(again.converged);
    CHECK(again.iterations == 0);
    CHECK(again.energy_trajectory.size() == 1);
}

TEST_CASE("energy decreases monotonically along the iteration") {
    GridPtr g = build_interval_grid(0.0, 1.0, 48);
    const ScalarProblem prob = make_problem(g, BoundaryKind::Neumann, 1.0, 0.0, 4.0);
    const ScaledCellRhs rhs(cell_samples(*g, [](Vec x) { return std::sin(4.0 * x.x) + 1.2; }));
    const SolveReport rep =
        solve_frozen_scalar(prob, rhs, nullptr, Field::from_fn(g, [](Vec x) { return x.x; }));
    REQUIRE(rep.converged);
    REQUIRE(rep.energy_trajectory.size() >= 3);
    for (std::size_t k = 1; k < rep.energy_trajectory.size(); ++k)
        CHECK(rep.energy_trajectory[k] <= rep.energy_trajectory[k - 1]);
    CHECK(rep.energy_trajectory.front() - rep.energy_trajectory.back() > 0.0);

    // starving the same solve of iterations reports the budget, not a throw
    NewtonOptions strict;
    strict.tol = 0.0;
    strict.max_iters = 2;
    const SolveReport starved = solve_frozen_scalar(
        prob, rhs, nullptr, Field::from_fn(g, [](Vec x) { return x.x; }), strict);
    CHECK_FALSE(starved.converged);
    CHECK(starved.max_iters_exceeded);
    CHECK(starved.iterations == 2);
}

TEST_CASE("comparison step against the bracket floor") {
    GridPtr g = build_interval_grid(0.0, 1.0, 32);
    const ScalarProblem prob = make_problem(g, BoundaryKind::Neumann, 1.0);
    Bracket b;
    b.sub = Field(g, 0.5);
    b.level = 0.5;

    const ConstRhs high(1.0);
    const SolveReport above = solve_frozen_scalar(prob, high, &b, b.sub);
    REQUIRE(above.converged);
    CHECK(above.bracket_margin == doctest::Approx(0.5).epsilon(1e-8));
    CHECK_FALSE(above.bracket_violation);

    const ConstRhs low(0.1); // minimizer 0.1 dives under the floor
    const SolveReport below = solve_frozen_scalar(prob, low, &b, b.sub);
    REQUIRE(below.converged);
    CHECK(below.bracket_margin == doctest::Approx(-0.4).epsilon(1e-8));
    CHECK(below.bracket_violation);
}

TEST_CASE("system components solve independently") {
    GridPtr g = build_interval_grid(0.0, 1.0, 24);
    SystemProblem prob;
    prob.grid = g;
    prob.op_u = make_problem(g, BoundaryKind::Neumann, 1.0).op;
    prob.op_v = prob.op_u;
    prob.reaction.arity = Arity::System; // no reaction terms: rhs is the frozen power alone
    prob.grad_cap = 10.0;

    const SystemState state{Field(g, 2.0), Field(g, 2.0), Field(g, 2.0), Field(g, 2.0)};
    Bracket bu, bv;
    bu.sub = Field(g, 0.5);
    bv.sub = Field(g, 0.3);

    const auto [ru, rv] = solve_frozen_system(prob, state, bu, bv);
    REQUIRE(ru.converged);
    REQUIRE(rv.converged);
    for (std::size_t i = 0; i < g->node_count(); ++i) {
        CHECK(ru.solution[i] == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(rv.solution[i] == doctest::Approx(2.0).epsilon(1e-10));
    }
    CHECK(ru.bracket_margin == doctest::Approx(1.5).epsilon(1e-8));

    // the first component's solve reads nothing from the other bracket
    Bracket bv2;
    bv2.sub = Field(g, 0.9);
    const auto [ru2, rv2] = solve_frozen_system(prob, state, bu, bv2);
    REQUIRE(rv2.converged);
    for (std::size_t i = 0; i < g->node_count(); ++i) CHECK(ru2.solution[i] == ru.solution[i]);
}
