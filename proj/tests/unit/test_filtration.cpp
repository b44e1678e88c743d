#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abdkit/filtration.hpp"
#include "abdkit/synthetic.hpp"
#include "helpers.hpp"

using namespace abdkit;

namespace {

double value_of(const EmbeddedGraph& g, double omega) { return direction_filter(g, omega).vertices.front().value; }

}  // namespace

TEST_CASE("direction filter projects onto the unit vector") {
    const auto p = EmbeddedGraph::make({{0, 3, 4}}, {});
    CHECK(value_of(p, std::numbers::pi / 2) == 4.0);
    CHECK(value_of(p, 0.0) == 3.0);
    const auto q = EmbeddedGraph::make({{0, 1, 1}}, {});
    CHECK(value_of(q, std::numbers::pi / 4) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(value_of(p, std::numbers::pi) == -3.0);
    CHECK(value_of(p, 3 * std::numbers::pi / 2) == -4.0);
}

TEST_CASE("direction filter records provenance") {
    const auto sg = direction_filter(EmbeddedGraph::make({{7, 1, 2}, {8, 2, 3}}, {{7, 8}}), 0.5);
    CHECK(sg.angle == 0.5);
    CHECK(sg.vertices.size() == 2);
    CHECK(sg.edges.size() == 1);
}

TEST_CASE("filter is 2pi-periodic and translation shifts by a constant") {
    Rng rng(5);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi), off(-10.0, 10.0);
    for (int t = 0; t < 100; ++t) {
        const auto g = random_embedded_graph(rng, 15);
        const double w = angle(rng), dx = off(rng), dy = off(rng);
        const auto a = direction_filter(g, w), b = direction_filter(g, w + 2 * std::numbers::pi);
        const auto moved = direction_filter(translated(g, dx, dy), w);
        const double shift = dx * std::cos(w) + dy * std::sin(w);
        for (std::size_t i = 0; i < a.vertices.size(); ++i) {
            CHECK(std::abs(a.vertices[i].value - b.vertices[i].value) <= 1e-12);
            CHECK(std::abs(moved.vertices[i].value - a.vertices[i].value - shift) <= 1e-9);
        }
    }
}

TEST_CASE("collapse of equal neighbours") {
    SUBCASE("a(0)-b(0)-c(5) becomes a two-vertex path") {
        const auto out = collapse_equal_adjacent(testing::path_graph({0, 0, 5}));
        REQUIRE(out.vertices.size() == 2);
        CHECK(out.vertices[0] == ScalarVertex{0, 0.0});
        CHECK(out.vertices[1] == ScalarVertex{2, 5.0});
        REQUIRE(out.edges.size() == 1);
        CHECK(out.edges[0] == Edge{0, 2});
    }
    SUBCASE("distinct path is unchanged") {
        const auto sg = testing::path_graph({0, 1, 2});
        const auto out = collapse_equal_adjacent(sg);
        CHECK(out.vertices == sg.vertices);
        CHECK(out.edges == sg.edges);
    }
    SUBCASE("flat triangle collapses to one vertex") {
        const auto sg = ScalarGraph::make({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 2}, {2, 0}});
        const auto out = collapse_equal_adjacent(sg);
        CHECK(out.vertices.size() == 1);
        CHECK(out.edges.empty());
    }
    SUBCASE("tolerance 0 keeps near ties") {
        const auto sg = testing::path_graph({0, 1e-12, 5});
        CHECK(collapse_equal_adjacent(sg).vertices.size() == 2);
        CHECK(collapse_equal_adjacent(sg, 0.0).vertices.size() == 3);
    }
    SUBCASE("merged vertex keeps the smallest id and its value") {
        const auto sg = ScalarGraph::make({{9, 1.0}, {4, 1.0 + 1e-10}, {6, 3.0}}, {{9, 4}, {4, 6}, {9, 6}});
        const auto out = collapse_equal_adjacent(sg);
        REQUIRE(out.vertices.size() == 2);
        CHECK(out.vertices[0].id == 4);
        CHECK(out.vertices[0].value == 1.0 + 1e-10);
        CHECK(out.edges.size() == 1);
    }
}

TEST_CASE("collapse is idempotent and the identity on generic input") {
    Rng rng(8);
    std::uniform_int_distribution<int> level(0, 3);
    for (int t = 0; t < 200; ++t) {
        const auto generic = random_scalar_graph(rng, 15);
        const auto same = collapse_equal_adjacent(generic);
        CHECK(same.vertices == generic.vertices);
        CHECK(same.edges == generic.edges);

        // Coarse values make many ties.
        auto tied = generic;
        for (auto& v : tied.vertices) v.value = level(rng);
        const auto once = collapse_equal_adjacent(tied);
        const auto twice = collapse_equal_adjacent(once);
        CHECK(once.vertices == twice.vertices);
        CHECK(once.edges == twice.edges);
        for (const auto& e : once.edges)
            CHECK(once.vertices[once.index_of(e.u)].value != once.vertices[once.index_of(e.v)].value);
    }
}
