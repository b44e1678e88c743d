#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "abdkit/merge_tree.hpp"
#include "abdkit/synthetic.hpp"
#include "helpers.hpp"

using namespace abdkit;
using testing::path_graph;

namespace {

std::vector<double> sorted_values(const MergeTree& mt) {
    auto v = mt.values();
    std::sort(v.begin(), v.end());
    return v;
}

// Node by the graph vertex it came from.
const MergeTreeNode& from_vertex(const MergeTree& mt, VertexId v) {
    for (const auto& n : mt.nodes())
        if (n.source == v) return n;
    throw std::runtime_error("no node for vertex");
}

}  // namespace

TEST_CASE("two minima merge, then merge with a third") {
    // Path a - c - b - e - d: a, b meet at c, then {a, b} meets d at e.
    enum : VertexId { a, b, c, d, e };
    const auto sg = ScalarGraph::make({{a, 0}, {b, 1}, {c, 3}, {d, 2}, {e, 4}}, {{a, c}, {c, b}, {b, e}, {e, d}});
    const auto mt = compute_merge_tree(sg);
    REQUIRE(mt.size() == 5);
    CHECK(mt.leaf_count() == 3);
    const auto& root = mt.node(mt.root());
    CHECK(root.source == e);
    const auto& saddle = from_vertex(mt, c);
    CHECK(saddle.parent == mt.root());
    CHECK(mt.nodes()[from_vertex(mt, a).parent].source == c);
    CHECK(mt.nodes()[from_vertex(mt, b).parent].source == c);
    CHECK(mt.nodes()[from_vertex(mt, d).parent].source == e);
    CHECK(value_isomorphic(mt, merge_tree_oracle(sg)));
}

TEST_CASE("monotone path gives the trivial tree at its minimum") {
    const auto mt = compute_merge_tree(path_graph({0, 1, 2, 3}));
    CHECK(mt.is_trivial());
    CHECK(mt.value(mt.root()) == 0.0);
    CHECK(merge_tree_oracle(path_graph({0, 1, 2, 3})).is_trivial());
}

TEST_CASE("W-shaped path") {
    const auto sg = path_graph({0, 5, 1, 6, 2});
    const auto mt = compute_merge_tree(sg);
    REQUIRE(mt.size() == 5);
    CHECK(sorted_values(mt) == std::vector<double>{0, 1, 2, 5, 6});
    CHECK(mt.value(mt.root()) == 6.0);
    const auto& saddle = from_vertex(mt, 1);
    CHECK(saddle.value == 5.0);
    std::vector<double> below;
    for (auto c : mt.children(mt.index_of(saddle.id))) below.push_back(mt.value(c));
    std::sort(below.begin(), below.end());
    CHECK(below == std::vector<double>{0, 1});
    CHECK(mt.value(from_vertex(mt, 4).parent) == 6.0);
    CHECK(canonical_form(merge_tree_oracle(sg)) == canonical_form(mt));
}

TEST_CASE("single vertex") {
    const auto sg = ScalarGraph::make({{3, 2.5}}, {});
    CHECK(compute_merge_tree(sg).is_trivial());
    CHECK(merge_tree_oracle(sg).is_trivial());
    CHECK(merge_tree_oracle(sg).value(0) == 2.5);
}

TEST_CASE("three components meeting at one vertex give one node of arity 3") {
    // Star: centre 10 with three leaves.
    const auto sg = ScalarGraph::make({{0, 10}, {1, 1}, {2, 2}, {3, 3}}, {{0, 1}, {0, 2}, {0, 3}});
    const auto mt = compute_merge_tree(sg);
    CHECK(mt.size() == 4);
    CHECK(mt.children(mt.root()).size() == 3);
    CHECK(value_isomorphic(mt, merge_tree_oracle(sg)));
}

TEST_CASE("invalid input") {
    const auto disconnected = ScalarGraph::make({{0, 0}, {1, 1}, {2, 2}}, {{0, 1}});
    CHECK_THROWS_AS(compute_merge_tree(disconnected), InputError);
    CHECK_THROWS_AS(merge_tree_oracle(disconnected), InputError);
    CHECK_THROWS_AS(compute_merge_tree(path_graph({0, 0, 1})), InputError);
}

TEST_CASE("MergeTree::make validation") {
    CHECK_THROWS_AS(MergeTree::make({}), InputError);
    // parent not above child
    CHECK_THROWS_AS(testing::tree({{0, 1, 0}, {1, 2, 0}, {2, 0, 0}}), InputError);
    // internal node with one child
    CHECK_THROWS_AS(testing::tree({{0, 5, 0}, {1, 3, 0}, {2, 1, 1}, {3, 0, 0}}), InputError);
    // two roots
    CHECK_THROWS_AS(testing::tree({{0, 5, 0}, {1, 3, 1}}), InputError);
    // duplicate id
    CHECK_THROWS_AS(testing::tree({{0, 5, 0}, {1, 3, 0}, {1, 2, 0}}), InputError);
}

TEST_CASE("sweep agrees with the oracle and leaves equal local minima") {
    Rng rng(42);
    for (int t = 0; t < 300; ++t) {
        const auto sg = random_scalar_graph(rng, 20);
        const auto mt = compute_merge_tree(sg);
        CHECK(value_isomorphic(mt, merge_tree_oracle(sg)));
        CHECK(mt.leaf_count() == count_local_minima(sg));
        CHECK(mt.value(mt.root()) == std::max_element(mt.nodes().begin(), mt.nodes().end(), [](auto& a, auto& b) {
                                         return a.value < b.value;
                                     })->value);
    }
}

TEST_CASE("subdividing a monotone edge leaves the tree unchanged") {
    Rng rng(7);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    for (int t = 0; t < 100; ++t) {
        const auto sg = random_scalar_graph(rng, 15);
        if (sg.edges.empty()) continue;
        const auto e = sg.edges[static_cast<std::size_t>(t) % sg.edges.size()];
        const double lo = sg.vertices[sg.index_of(e.u)].value, hi = sg.vertices[sg.index_of(e.v)].value;
        auto vs = sg.vertices;
        const VertexId mid = 1000;
        vs.push_back({mid, lo + frac(rng) * (hi - lo)});
        std::vector<std::pair<VertexId, VertexId>> es;
        for (const auto& f : sg.edges)
            if (!(f == e)) es.emplace_back(f.u, f.v);
        es.emplace_back(e.u, mid);
        es.emplace_back(mid, e.v);
        CHECK(canonical_form(compute_merge_tree(ScalarGraph::make(vs, es))) == canonical_form(compute_merge_tree(sg)));
    }
}

TEST_CASE("median and mean shifts") {
    SUBCASE("trivial tree moves to 0") {
        const auto s = shift_median_zero(MergeTree::trivial(7.0));
        CHECK(s.value(0) == 0.0);
    }
    SUBCASE("median already zero") {
        const auto mt = testing::tree({{0, 1, 0}, {1, -1, 0}, {2, 0, 0}});
        CHECK(shift_median_zero(mt) == mt);
    }
    SUBCASE("mean") {
        const auto mt = testing::tree({{0, 10, 0}, {1, 0, 0}, {2, 2, 0}});
        CHECK(sorted_values(shift_median_zero(mt, Centering::mean)) == std::vector<double>{-4, -2, 6});
    }
    SUBCASE("even count uses the midpoint of the central pair") {
        const auto mt = testing::tree({{0, 10, 0}, {1, 0, 0}, {2, 2, 0}, {3, 4, 0}});
        CHECK(center_of(mt, Centering::median) == 3.0);
    }
    SUBCASE("value differences are unchanged") {
        Rng rng(9);
        for (int t = 0; t < 50; ++t) {
            const auto mt = random_merge_tree(rng, 8);
            for (auto mode : {Centering::median, Centering::mean}) {
                const auto s = shift_median_zero(mt, mode);
                const double d = s.value(0) - mt.value(0);
                for (std::size_t i = 0; i < mt.size(); ++i) CHECK(s.value(i) - mt.value(i) == doctest::Approx(d).epsilon(1e-12));
                CHECK(std::abs(center_of(s, mode)) <= 1e-12);
            }
        }
    }
    CHECK(parse_centering("mean") == Centering::mean);
    CHECK_THROWS_AS(parse_centering("mode"), InputError);
}

TEST_CASE("merge-tree JSON round trip") {
    Rng rng(10);
    for (int t = 0; t < 30; ++t) {
        const auto mt = random_merge_tree(rng, 9);
        CHECK(value_isomorphic(parse_merge_tree_json(merge_tree_to_json(mt)), mt));
    }
    const auto mt = parse_merge_tree_json(R"({"nodes":[{"id":1,"value":3},{"id":2,"value":0},{"id":3,"value":1}],
                                              "parent":{"1":1,"2":1,"3":1}})");
    CHECK(mt.size() == 3);
    CHECK(mt.value(mt.root()) == 3.0);
    CHECK_THROWS_AS(parse_merge_tree_json(R"({"nodes":[{"id":1,"value":3}],"parent":{"1":9}})"), InputError);
    CHECK_THROWS_AS(parse_merge_tree_json("[]"), InputError);
}
