#include <cmath>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "surplus/error.hpp"
#include "surplus/extraction.hpp"

using namespace surplus;
using namespace surplus::extraction;
using models::TabularModel;

namespace {

TabularModel two_vertices() {
    TabularModel m;
    m.states = 2;
    m.types = {"1", "2"};
    m.beliefs = {{1, 0}, {0, 1}};
    m.values = {1, 2};
    return m;
}

TabularModel identical_pair(double v1, double v2) {
    TabularModel m;
    m.states = 2;
    m.types = {"a", "b"};
    m.beliefs = {{0.3, 0.7}, {0.3, 0.7}};
    m.values = {v1, v2};
    return m;
}

double provenance_error(const Contract& c) {
    const auto rebuilt = compose(c.payments.size(), *c.provenance);
    double e = 0.0;
    for (std::size_t k = 0; k < c.payments.size(); ++k) e = std::max(e, std::fabs(rebuilt.payments[k] - c.payments[k]));
    return e;
}

}  // namespace

TEST_CASE("classification of tabular instances") {
    std::mt19937_64 rng(8);
    const auto m = gen::general_position(rng, 6, 7);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto c = classify_type(m, i);
        CHECK(c.kind == Detectability::StronglyDetectable);
        CHECK(c.margin > 0.0);
    }
    const auto inst = gen::planted_instance(rng, gen::PlantedValue::Below);
    const auto c = classify_type(inst.model, inst.planted);
    CHECK(c.kind == Detectability::NotDetectable);
    CHECK(c.witness_residual <= 1e-8);
    CHECK_THROWS_AS(classify_type(m, 99), IndexOutOfRange);
}

TEST_CASE("classification of the curve") {
    const auto m = models::counterexample();
    const auto c0 = classify_type(m, 0.0, 201);
    CHECK(c0.kind == Detectability::EventuallyDetectable);
    CHECK(c0.chain.length() == 2);
    CHECK(c0.chain_declared);
    const auto c1 = classify_type(m, 1.0, 201);
    CHECK(c1.kind == Detectability::EventuallyDetectable);
    const auto mid = classify_type(m, 0.5, 201);
    CHECK(mid.kind == Detectability::Detectable);
    CHECK(mid.margin > 0.0);
    // A parameter off the grid is inserted.
    const auto off = classify_type(m, 0.3337, 101);
    CHECK(off.kind == Detectability::Detectable);
    CHECK(off.param == doctest::Approx(0.3337));
}

TEST_CASE("full extraction menu") {
    TabularModel single;
    single.states = 2;
    single.types = {"only"};
    single.beliefs = {{0.4, 0.6}};
    single.values = {3.0};
    const auto sm = full_extraction_menu(single);
    REQUIRE(sm.size() == 1);
    CHECK(sm.entries[0].contract.payments == std::vector<double>{3.0, 3.0});
    CHECK(verify_menu(single, sm, VerifyMode::full()).verdict == Verdict::Full);

    const auto m = two_vertices();
    const auto menu = full_extraction_menu(m);
    const auto& z1 = menu.entries[0].contract.provenance->terms[0].second;
    const auto& z2 = menu.entries[1].contract.provenance->terms[0].second;
    CHECK(z1[0] == doctest::Approx(0.0));
    CHECK(z1[1] == doctest::Approx(1.0));
    CHECK(z2[0] == doctest::Approx(1.0));
    CHECK(z2[1] == doctest::Approx(0.0));
    const auto rep = verify_menu(m, menu, VerifyMode::full());
    CHECK(rep.verdict == Verdict::Full);
    CHECK(rep.worst_cross < 0.0);

    CHECK_THROWS_AS(full_extraction_menu(identical_pair(2, 1)), NotAllDetectable);
}

TEST_CASE("full extraction LP") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        const auto m = gen::general_position(rng, 5, 6);
        const auto res = full_extraction_lp(m);
        REQUIRE(res.status == lp::Status::Optimal);
        CHECK(res.certificate_passed);
        CHECK(verify_menu(m, *res.menu, VerifyMode::full()).verdict == Verdict::Full);
        // The constructed menu is feasible for the LP, so its norms bound the LP optimum.
        const auto menu = full_extraction_menu(m);
        for (std::size_t t = 0; t < m.size(); ++t) {
            double norm = 0.0;
            for (double x : menu.entries[t].contract.payments) norm = std::max(norm, std::fabs(x));
            CHECK(res.contract_norms[t] <= norm + 1e-9);
        }
        // Joint program and per-type blocks agree.
        const auto joint = lp::solve(build_full_extraction_lp(m));
        REQUIRE(joint.status == lp::Status::Optimal);
        CHECK(joint.objective_value == doctest::Approx(res.objective).epsilon(1e-9));
    }

    const auto dup = full_extraction_lp(identical_pair(2, 1));
    CHECK(dup.status == lp::Status::Infeasible);
    CHECK(dup.certificate_passed);
    CHECK(dup.failing_type.has_value());
}

TEST_CASE("planted combination: orientation of the value decides feasibility") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const auto below = gen::planted_instance(rng, gen::PlantedValue::Below);
        const auto rb = full_extraction_lp(below.model);
        CHECK(rb.status == lp::Status::Infeasible);
        CHECK(rb.certificate_passed);
        const auto above = gen::planted_instance(rng, gen::PlantedValue::Above);
        // A value above the combination can still be extracted in full.
        CHECK(full_extraction_lp(above.model).status == lp::Status::Optimal);
    }
}

TEST_CASE("full-extraction contract norms grow on the curve") {
    const auto m = models::counterexample();
    double prev = 0.0;
    for (std::size_t n : {9u, 17u, 33u}) {
        const auto res = full_extraction_lp(models::sample(m, n));
        REQUIRE(res.status == lp::Status::Optimal);
        CHECK(res.max_contract_norm > prev);
        prev = res.max_contract_norm;
    }
}

TEST_CASE("verify flags a menu lowered below value") {
    const auto m = two_vertices();
    auto menu = full_extraction_menu(m);
    for (auto& e : menu.entries)
        for (double& x : e.contract.payments) x -= 0.05;
    const auto rep = verify_menu(m, menu, VerifyMode::full());
    CHECK(rep.verdict == Verdict::Fails);
    CHECK(rep.worst_own_high == doctest::Approx(0.05));
    CHECK(!rep.failures.empty());
}

TEST_CASE("verified full menus only arise when every type is detectable") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const auto inst = gen::planted_instance(rng, rep % 2 ? gen::PlantedValue::Above : gen::PlantedValue::Below);
        const auto res = full_extraction_lp(inst.model);
        if (res.status != lp::Status::Optimal) continue;
        if (verify_menu(inst.model, *res.menu, VerifyMode::full()).verdict != Verdict::Full) continue;
        // Full extraction held although the planted type is a combination:
        // possible only because its value is above the combination.
        CHECK(inst.model.values[inst.planted] > inst.combination_value);
    }
}

TEST_CASE("virtual extraction on the curve") {
    const auto m = models::counterexample();
    const double eps = 0.05;
    const auto res = virtual_extraction_menu(m, eps, 101);
    REQUIRE(res.menu.size() == 101);
    CHECK(res.log[0].method == "case2");
    CHECK(res.log[50].method == "case1");
    for (const auto& e : res.menu.entries) CHECK(provenance_error(e.contract) <= 1e-10);

    // Every functional vanishes at its owner.
    for (const auto& e : res.menu.entries)
        for (const auto& [alpha, z] : e.contract.provenance->terms)
            CHECK(std::fabs(geometry::evaluate(m.belief(e.param), z)) <= 1e-10);

    const auto coarse = verify_menu(m, res.menu, 101, VerifyMode::virtual_eps(eps));
    CHECK(coarse.passed());
    CHECK(coarse.worst_own_low >= 0.0);
    CHECK(coarse.worst_own_high <= 1e-9);
    const auto fine = verify_menu(m, res.menu, 1001, VerifyMode::virtual_eps(eps));
    CHECK(fine.passed());
    CHECK(fine.lipschitz_slack > 0.0);

    const auto& p0 = *res.menu.entries[0].contract.provenance;
    REQUIRE(p0.terms.size() == 2);
    CHECK(p0.terms[0].second == models::chord_functional());
    CHECK(p0.terms[1].second == models::endpoint_separator());
}

TEST_CASE("virtual extraction on the detectable-only restriction") {
    const auto m = models::restrict(models::counterexample(), 0.25, 0.75);
    const auto res = virtual_extraction_menu(m, 0.05, 41);
    for (const auto& l : res.log) CHECK(l.method == "case1");
    CHECK(verify_menu(m, res.menu, 401, VerifyMode::virtual_eps(0.05)).passed());
}

TEST_CASE("constant beliefs with constant value") {
    models::ParametricModel m;
    m.name = "flat";
    m.states = 2;
    m.belief_fn = [](double) { return geometry::Vector{0.5, 0.5}; };
    m.value_fn = [](double) { return 0.7; };
    const auto res = virtual_extraction_menu(m, 0.01, 5);
    for (const auto& e : res.menu.entries) CHECK(e.contract.payments == std::vector<double>{0.7, 0.7});
    CHECK(verify_menu(m, res.menu, 50, VerifyMode::virtual_eps(0.01)).passed());
}

TEST_CASE("virtual extraction rejects non-detectable types") {
    models::ParametricModel m;
    m.name = "fold";
    m.states = 2;
    // Beliefs retrace a segment, so interior points repeat.
    m.belief_fn = [](double t) {
        const double s = t < 0.5 ? 2 * t : 2 - 2 * t;
        return geometry::Vector{0.2 + 0.6 * s, 0.8 - 0.6 * s};
    };
    m.value_fn = [](double t) { return t; };
    m.lipschitz_pi = 2.4;
    m.lipschitz_v = 1;
    CHECK_THROWS_AS(virtual_extraction_menu(m, 0.05, 11), NotEventuallyDetectable);
    CHECK_THROWS_AS(virtual_extraction_menu(models::counterexample(), 0.0, 11), DomainError);
}

TEST_CASE("compression") {
    const auto m = models::counterexample();
    const double eps = 0.05;
    const auto res = virtual_extraction_menu(m, eps, 101);
    const auto comp = compress_menu(m, res.menu, eps, 101);
    CHECK(comp.menu.size() <= res.menu.size());
    CHECK(comp.menu.size() >= 1);
    const auto rep = verify_menu(models::sample(m, 101), comp.menu, VerifyMode::finite_menu(2 * eps));
    CHECK(rep.passed());
    CHECK(rep.min_best >= 0.0);
    CHECK(rep.worst_best <= 2 * eps);

    // Compressing an already-finite menu returns a subset of it.
    auto comp_in = comp.menu;
    for (auto& e : comp_in.entries)
        for (double& x : e.contract.payments) x += eps;
    CHECK(compress_menu(m, comp_in, eps, 101).menu.size() <= comp_in.size());
    CHECK_THROWS_AS(compress_menu(m, comp.menu, eps / 10, 101), InputMenuFails);

    // Single-type-like model: constant beliefs and value.
    models::ParametricModel flat;
    flat.name = "flat";
    flat.states = 2;
    flat.belief_fn = [](double) { return geometry::Vector{0.5, 0.5}; };
    flat.value_fn = [](double) { return 0.7; };
    const auto fr = virtual_extraction_menu(flat, 0.01, 5);
    CHECK(compress_menu(flat, fr.menu, 0.01, 5).menu.size() == 1);
}
