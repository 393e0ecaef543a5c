#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "surplus/error.hpp"
#include "surplus/lp.hpp"

using namespace surplus::lp;

TEST_CASE("free variable with a single lower-bound row") {
    LinearProgram lp(1, Sense::Minimize);
    lp.objective = {1.0};
    lp.set_free(0);
    lp.add({1.0}, Relation::GreaterEqual, 1.0);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::Optimal);
    CHECK(sol.primal[0] == doctest::Approx(1.0));
    CHECK(sol.objective_value == doctest::Approx(1.0));
    CHECK(sol.duals[0] == doctest::Approx(1.0));
    const auto rep = check_certificate(lp, sol);
    CHECK(rep.passed);
    CHECK(rep.primal_feasibility == 0.0);
    CHECK(rep.duality_gap == doctest::Approx(0.0));
    CHECK(rep.complementary_slackness == 0.0);
}

TEST_CASE("contradictory bound and row is infeasible with a Farkas vector") {
    LinearProgram lp(1, Sense::Maximize);
    lp.add({1.0}, Relation::LessEqual, -1.0);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::Infeasible);
    REQUIRE(sol.duals.size() == 1);
    CHECK(sol.duals[0] < 0.0);
    const auto rep = check_certificate(lp, sol);
    CHECK(rep.passed);
    CHECK(rep.farkas_margin > 0.0);
}

TEST_CASE("triangle: optimum at one of the two tied vertices") {
    LinearProgram lp(2, Sense::Minimize);
    lp.objective = {-1.0, -1.0};
    lp.add({1.0, 1.0}, Relation::LessEqual, 1.0);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::Optimal);
    CHECK(sol.objective_value == doctest::Approx(-1.0));
    const bool v10 = std::fabs(sol.primal[0] - 1) < 1e-12 && std::fabs(sol.primal[1]) < 1e-12;
    const bool v01 = std::fabs(sol.primal[1] - 1) < 1e-12 && std::fabs(sol.primal[0]) < 1e-12;
    CHECK((v10 || v01));
    CHECK(oracle::enumerate_vertices(lp).best == doctest::Approx(-1.0));
    CHECK(check_certificate(lp, sol).passed);
}

TEST_CASE("perturbed primal is flagged with the size of the perturbation") {
    LinearProgram lp(1, Sense::Minimize);
    lp.objective = {1.0};
    lp.set_free(0);
    lp.add({1.0}, Relation::GreaterEqual, 1.0);
    auto sol = solve(lp);
    sol.primal[0] -= 1e-3;
    const auto rep = check_certificate(lp, sol);
    CHECK(rep.primal_feasibility == doctest::Approx(1e-3));
    CHECK_FALSE(rep.passed);
}

TEST_CASE("unbounded program returns an improving ray") {
    LinearProgram lp(2, Sense::Maximize);
    lp.objective = {1.0, 1.0};
    lp.add({1.0, -1.0}, Relation::LessEqual, 1.0);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::Unbounded);
    const auto rep = check_certificate(lp, sol);
    CHECK(rep.passed);
    CHECK(rep.ray_improvement > 0.0);
}

TEST_CASE("unbounded free variable via the split transform") {
    LinearProgram lp(1, Sense::Minimize);
    lp.objective = {1.0};
    lp.set_free(0);
    lp.add({1.0}, Relation::LessEqual, 3.0);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::Unbounded);
    CHECK(sol.ray[0] < 0.0);
    CHECK(check_certificate(lp, sol).passed);
}

TEST_CASE("upper-bounded only and boxed variables") {
    LinearProgram lp(2, Sense::Maximize);
    lp.objective = {1.0, 2.0};
    lp.set_bounds(0, -kInf, 4.0);
    lp.set_bounds(1, -1.0, 2.5);
    lp.add({1.0, 1.0}, Relation::LessEqual, 5.0);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::Optimal);
    CHECK(sol.primal[0] == doctest::Approx(2.5));
    CHECK(sol.primal[1] == doctest::Approx(2.5));
    CHECK(sol.objective_value == doctest::Approx(7.5));
    CHECK(sol.duals[0] == doctest::Approx(1.0));
    CHECK(check_certificate(lp, sol).passed);
}

TEST_CASE("equality rows carry free-signed duals") {
    // min x + 2y s.t. x + y = 3, x - y <= 1: optimum (2, 1), shadow prices 3/2 and -1/2.
    LinearProgram lp(2, Sense::Minimize);
    lp.objective = {1.0, 2.0};
    lp.add({1.0, 1.0}, Relation::Equal, 3.0);
    lp.add({1.0, -1.0}, Relation::LessEqual, 1.0);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::Optimal);
    CHECK(sol.primal[0] == doctest::Approx(2.0));
    CHECK(sol.primal[1] == doctest::Approx(1.0));
    CHECK(sol.objective_value == doctest::Approx(4.0));
    CHECK(sol.duals[0] == doctest::Approx(1.5));
    CHECK(sol.duals[1] == doctest::Approx(-0.5));
    CHECK(check_certificate(lp, sol).passed);
}

TEST_CASE("malformed programs are rejected") {
    LinearProgram empty(0);
    CHECK_THROWS_AS(solve(empty), surplus::MalformedProgram);

    LinearProgram short_row(2);
    short_row.add({1.0}, Relation::LessEqual, 1.0);
    CHECK_THROWS_AS(solve(short_row), surplus::MalformedProgram);

    LinearProgram nan_rhs(1);
    nan_rhs.add({1.0}, Relation::LessEqual, std::nan(""));
    CHECK_THROWS_AS(solve(nan_rhs), surplus::MalformedProgram);

    LinearProgram inf_coef(1);
    inf_coef.add({kInf}, Relation::LessEqual, 1.0);
    CHECK_THROWS_AS(solve(inf_coef), surplus::MalformedProgram);

    LinearProgram bad_bounds(1);
    bad_bounds.set_bounds(0, kInf, kInf);
    CHECK_THROWS_AS(solve(bad_bounds), surplus::MalformedProgram);
}

TEST_CASE("degenerate cycling-prone program terminates (Beale)") {
    // Classic example on which the largest-coefficient rule cycles.
    LinearProgram lp(4, Sense::Maximize);
    lp.objective = {0.75, -150.0, 0.02, -6.0};
    lp.add({0.25, -60.0, -0.04, 9.0}, Relation::LessEqual, 0.0);
    lp.add({0.5, -90.0, -0.02, 3.0}, Relation::LessEqual, 0.0);
    lp.add({0.0, 0.0, 1.0, 0.0}, Relation::LessEqual, 1.0);
    const auto sol = solve(lp);
    REQUIRE(sol.status == Status::Optimal);
    CHECK(sol.objective_value == doctest::Approx(0.05));
    CHECK(check_certificate(lp, sol).passed);
}

TEST_CASE("random bounded programs agree with vertex enumeration") {
    std::mt19937_64 rng(20240611);
    int optimal = 0, infeasible = 0;
    for (int k = 0; k < 120; ++k) {
        CAPTURE(k);
        const auto lp = oracle::random_bounded_lp(rng);
        const auto sol = solve(lp);
        const auto ref = oracle::enumerate_vertices(lp);
        const auto rep = check_certificate(lp, sol);
        CHECK(rep.passed);
        if (ref.feasible) {
            REQUIRE(sol.status == Status::Optimal);
            CHECK(std::fabs(sol.objective_value - ref.best) <= 1e-8 * (1 + std::fabs(ref.best)));
            ++optimal;
        } else {
            CHECK(sol.status == Status::Infeasible);
            ++infeasible;
        }
    }
    CHECK(optimal > 20);
    CHECK(infeasible > 5);
}

TEST_CASE("weak duality: dual objective bounds primal on feasible programs") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 60; ++k) {
        const auto lp = oracle::random_bounded_lp(rng);
        const auto sol = solve(lp);
        if (sol.status != Status::Optimal) continue;
        const auto rep = check_certificate(lp, sol);
        CHECK(rep.duality_gap <= 1e-9 * (1 + std::fabs(sol.objective_value)));
        CHECK(rep.dual_feasibility <= 1e-9);
    }
}

TEST_CASE("iteration limit surfaces as SolverFailure") {
    LinearProgram lp(3, Sense::Maximize);
    lp.objective = {1.0, 1.0, 1.0};
    lp.add({1.0, 1.0, 1.0}, Relation::LessEqual, 1.0);
    lp.add({1.0, 0.0, 0.0}, Relation::GreaterEqual, 0.2);
    SolverOptions opts;
    opts.max_iterations = 1;
    CHECK_THROWS_AS(solve(lp, opts), surplus::SolverFailure);
}

TEST_CASE("status names") {
    CHECK(to_string(Status::Optimal) == "optimal");
    CHECK(to_string(Status::Infeasible) == "infeasible");
    CHECK(to_string(Status::Unbounded) == "unbounded");
}
