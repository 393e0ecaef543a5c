#include <cmath>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "surplus/error.hpp"
#include "surplus/geometry.hpp"
#include "surplus/models.hpp"

using namespace surplus;
using namespace surplus::geometry;

namespace {

FiniteBeliefSet simplex_vertices() { return FiniteBeliefSet({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}); }

double inf_norm_residual(const FiniteBeliefSet& set, std::size_t i, const std::vector<double>& mu) {
    double r = 0.0;
    for (std::size_t c = 0; c < set.dim(); ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < set.size(); ++j) acc += mu[j] * set.points[j][c];
        r = std::max(r, std::fabs(acc - set.points[i][c]));
    }
    return r;
}

}  // namespace

TEST_CASE("affine dimension") {
    CHECK(affine_dimension(FiniteBeliefSet({{0.2, 0.3, 0.5}})) == 0);
    CHECK(affine_dimension(simplex_vertices()) == 2);
    CHECK_THROWS_AS(affine_dimension(FiniteBeliefSet{}), EmptySet);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Vector a{0.6, 0.3, 0.1}, b{0.1, 0.2, 0.7};
    std::vector<Vector> seg;
    for (int k = 0; k < 10; ++k) {
        const double s = u(rng);
        seg.push_back({(1 - s) * a[0] + s * b[0], (1 - s) * a[1] + s * b[1], (1 - s) * a[2] + s * b[2]});
    }
    CHECK(affine_dimension(FiniteBeliefSet(seg)) == 1);

    // Degenerate input: all points identical.
    CHECK(affine_dimension(FiniteBeliefSet({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}})) == 0);
}

TEST_CASE("is_extreme on simplex vertices, barycenter and duplicates") {
    const auto s = simplex_vertices();
    for (std::size_t i = 0; i < 3; ++i) CHECK(is_extreme(s, i).extreme);

    FiniteBeliefSet with_center({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    const auto r = is_extreme(with_center, 3);
    REQUIRE_FALSE(r.extreme);
    CHECK(r.witness[0] == doctest::Approx(1.0 / 3));
    CHECK(r.witness[1] == doctest::Approx(1.0 / 3));
    CHECK(r.witness[2] == doctest::Approx(1.0 / 3));
    CHECK(r.witness[3] == 0.0);
    CHECK(r.residual <= 1e-12);

    FiniteBeliefSet dup({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 0}});
    const auto d = is_extreme(dup, 1);
    REQUIRE_FALSE(d.extreme);
    CHECK(d.witness[3] == doctest::Approx(1.0));
    CHECK(d.witness[0] == doctest::Approx(0.0));
    CHECK(d.witness[2] == doctest::Approx(0.0));

    CHECK_THROWS_AS(is_extreme(s, 3), IndexOutOfRange);
}

TEST_CASE("expose_set") {
    const auto s = simplex_vertices();
    const auto e = expose_set(s, {0});
    REQUIRE(e);
    CHECK(e->margin == doctest::Approx(1.0));
    const auto v = evaluate_all(s, e->z);
    CHECK(std::fabs(v[0]) <= 1e-12);
    CHECK(v[1] >= 1.0 - 1e-12);
    CHECK(v[2] >= 1.0 - 1e-12);

    FiniteBeliefSet with_center({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    CHECK_FALSE(expose_set(with_center, {3}));
    CHECK(exposure_margin(with_center, {3}).margin <= 1e-12);

    FiniteBeliefSet dup({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 0}});
    CHECK_FALSE(expose_set(dup, {1}));

    // An edge of the triangle is an exposed face.
    const auto edge = expose_set(s, {0, 1});
    REQUIRE(edge);
    CHECK(edge->margin == doctest::Approx(1.0));

    CHECK_THROWS_AS(expose_set(s, {}), IndexOutOfRange);
    CHECK_THROWS_AS(expose_set(s, {0, 1, 2}), IndexOutOfRange);
    CHECK_THROWS_AS(expose_set(s, {5}), IndexOutOfRange);
}

TEST_CASE("face_of") {
    const auto s = simplex_vertices();
    CHECK(face_of(s, {0, 1, 1}) == IndexSet{0});
    CHECK(face_of(s, {0, 0, 0}) == IndexSet{0, 1, 2});
    CHECK_THROWS_AS(face_of(s, {-1, 1, 1}), NotSupporting);

    const auto m = models::counterexample();
    const auto grid = models::sample(m, 401);
    const auto face = face_of(grid.belief_set(), models::chord_functional());
    CHECK(face == IndexSet{0, 400});
    CHECK(affine_dimension(grid.belief_set(), face) < affine_dimension(grid.belief_set()));
}

TEST_CASE("exposure chains") {
    const auto s = simplex_vertices();
    const auto c = exposure_chain(s, 0);
    CHECK(c.length() == 1);
    CHECK(c.stages.back() == IndexSet{0});

    FiniteBeliefSet dup({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 0}});
    CHECK_THROWS_AS(exposure_chain(dup, 1), NotExtreme);

    const auto m = models::counterexample();
    const auto ts = models::uniform_grid(201);
    const auto grid = models::sample_at(m, ts);
    const auto declared = models::declared_faces_on(m, ts);
    REQUIRE(declared.size() == 3);
    for (std::size_t target : {std::size_t{0}, std::size_t{200}}) {
        const auto ch = exposure_chain(grid.belief_set(), target, declared);
        REQUIRE(ch.length() == 2);
        CHECK(ch.stages[0].size() == 201);
        CHECK(ch.stages[1] == IndexSet{0, 200});
        CHECK(ch.stages[2] == IndexSet{target});
        CHECK(ch.links[0].declared);
        CHECK(ch.links[1].declared);
        CHECK(ch.links[0].margin > 0.0);
        CHECK(ch.links[1].margin == doctest::Approx(0.2));
    }
    // Without declared faces the finite grid exposes the endpoint directly.
    CHECK(exposure_chain(grid.belief_set(), 0).length() == 1);
}

TEST_CASE("chain stages shrink strictly") {
    // Triangle with an extra point in the middle of one edge.
    FiniteBeliefSet s({{0.5, 0.5, 0.0}, {0.25, 0.5, 0.25}, {0.0, 0.5, 0.5}, {0.2, 0.2, 0.6}});
    const auto ch = exposure_chain(s, 0);
    CHECK(ch.stages.back() == IndexSet{0});
    for (std::size_t k = 1; k < ch.stages.size(); ++k) CHECK(ch.stages[k].size() < ch.stages[k - 1].size());
}

TEST_CASE("exposed implies extreme; extreme implies exposed on distinct finite sets") {
    std::mt19937_64 rng(1234);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 9)(rng);
        const std::size_t sdim = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
        const auto m = models::random_polytope(rng(), n, sdim);
        const auto set = m.belief_set();
        for (std::size_t i = 0; i < n; ++i) {
            const auto ext = is_extreme(set, i);
            const auto e = expose_set(set, {i});
            if (e) CHECK(ext.extreme);
            if (ext.extreme) CHECK(e.has_value());
            if (!ext.extreme) CHECK(inf_norm_residual(set, i, ext.witness) <= 1e-8);
        }
    }
}

TEST_CASE("planted combinations are never extreme") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 30; ++rep) {
        const auto inst = gen::planted_instance(rng, gen::PlantedValue::Below);
        const auto set = inst.model.belief_set();
        const auto r = is_extreme(set, inst.planted);
        CHECK_FALSE(r.extreme);
        CHECK(r.residual <= 1e-8);
    }
}

TEST_CASE("monotone chain hull") {
    std::vector<std::pair<double, double>> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}};
    const auto h = convex_hull_2d(pts);
    REQUIRE(h.size() == 4);
    CHECK(h[0] == std::pair<double, double>{0, 0});
    CHECK(h[1] == std::pair<double, double>{1, 0});
    CHECK(h[2] == std::pair<double, double>{1, 1});
    CHECK(h[3] == std::pair<double, double>{0, 1});
}
