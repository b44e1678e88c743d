#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "abdkit/branching.hpp"
#include "abdkit/synthetic.hpp"
#include "helpers.hpp"

using namespace abdkit;
using testing::tree;

namespace {

const DistanceOptions kBaseline{DistanceMode::exact, 1e-6, Engine::baseline};

MergeTree two_leaf() { return tree({{10, 5, 10}, {1, 1, 10}, {2, 3, 10}}); }

// l1, l2 under s1; l3 and s1 under s2.
MergeTree caterpillar() { return tree({{5, 9, 5}, {4, 6, 5}, {1, 0, 4}, {2, 2, 4}, {3, 4, 5}}); }

std::set<std::pair<NodeId, NodeId>> branch_ids(const MergeTree& mt, const BranchDecomposition& bd) {
    std::set<std::pair<NodeId, NodeId>> out;
    for (const auto& b : bd.branches) out.emplace(mt.node(b.minimum).id, mt.node(b.top).id);
    return out;
}

// Counts decompositions without using the enumerator: assign every leaf an
// ancestor (or itself, for the trivial tree), keep assignments whose paths are
// edge-disjoint and cover all edges, and weigh each by its number of
// root-anchored branches (any of which may be designated).
std::size_t count_by_set_cover(const MergeTree& mt) {
    if (mt.is_trivial()) return 1;
    const auto leaves = mt.leaves();
    std::vector<std::vector<std::size_t>> ancestors(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i)
        for (auto v = leaves[i]; v != mt.root();) {
            v = mt.node(v).parent;
            ancestors[i].push_back(v);
        }
    std::size_t total = 0;
    std::vector<std::size_t> choice(leaves.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == leaves.size()) {
            std::map<std::size_t, int> edge_use;  // edge keyed by its lower node
            std::size_t at_root = 0;
            for (std::size_t k = 0; k < leaves.size(); ++k) {
                const auto top = ancestors[k][choice[k]];
                if (top == mt.root()) ++at_root;
                for (auto v = leaves[k]; v != top; v = mt.node(v).parent) ++edge_use[v];
            }
            if (edge_use.size() != mt.size() - 1) return;
            for (const auto& [e, n] : edge_use)
                if (n != 1) return;
            total += at_root;
            return;
        }
        for (choice[i] = 0; choice[i] < ancestors[i].size(); ++choice[i]) rec(i + 1);
    };
    rec(0);
    return total;
}

}  // namespace

TEST_CASE("matching and removal costs") {
    CHECK(matching_cost(1, 5, 1, 5) == 0.0);
    CHECK(matching_cost(1, 5, 3, 10) == 5.0);
    CHECK(matching_cost(0, 0, -2, 4) == 4.0);
    CHECK(removal_cost(3, 3) == 0.0);
    CHECK(removal_cost(1, 5) == 2.0);
    CHECK(removal_cost(-4, 9) == 6.5);
    const Branch u{0, 1, 1.0, 5.0}, v{0, 1, 3.0, 10.0};
    CHECK(matching_cost(u, v) == 5.0);
    CHECK(removal_cost(u) == 2.0);
}

TEST_CASE("decompositions of small trees") {
    SUBCASE("trivial tree has the single degenerate branch") {
        const auto mt = MergeTree::trivial(4.0, 7);
        const auto ds = enumerate_branch_decompositions(mt);
        REQUIRE(ds.size() == 1);
        REQUIRE(ds[0].branches.size() == 1);
        CHECK(ds[0].branches[0].degenerate());
        CHECK(ds[0].branches[0].min_value == 4.0);
        const auto rtr = rooted_tree_representation(mt, ds[0]);
        CHECK(rtr.size() == 1);
        CHECK(rtr.root_branches == std::vector<std::size_t>{0});
    }
    SUBCASE("two leaves give two decompositions, one per root branch") {
        const auto mt = two_leaf();
        const auto ds = enumerate_branch_decompositions(mt);
        REQUIRE(ds.size() == 2);
        CHECK(branch_ids(mt, ds[0]) == std::set<std::pair<NodeId, NodeId>>{{1, 10}, {2, 10}});
        CHECK(branch_ids(mt, ds[1]) == branch_ids(mt, ds[0]));
        CHECK(mt.node(ds[0].branches[0].minimum).id == 1);
        CHECK(mt.node(ds[1].branches[0].minimum).id == 2);
        for (const auto& d : ds) {
            const auto rtr = rooted_tree_representation(mt, d);
            CHECK(rtr.size() == 2);
            CHECK(rtr.parent[1] == 0);
            CHECK(rtr.root_branches.size() == 2);
        }
    }
    SUBCASE("caterpillar count matches the set-cover count") {
        CHECK(count_branch_decompositions(caterpillar()) == 4);
        CHECK(enumerate_branch_decompositions(caterpillar()).size() == 4);
        CHECK(count_by_set_cover(caterpillar()) == 4);
    }
}

TEST_CASE("caterpillar representations") {
    const auto mt = caterpillar();
    const auto ds = enumerate_branch_decompositions(mt);
    std::size_t stars = 0, paths = 0;
    for (const auto& d : ds) {
        const auto rtr = rooted_tree_representation(mt, d);
        REQUIRE(rtr.size() == 3);
        const auto root_min = mt.node(rtr.vertices[0].minimum).id;
        if (rtr.children[0].size() == 2) {
            // Root branch runs through s1: both others hang off it.
            CHECK((root_min == 1 || root_min == 2));
            ++stars;
        } else {
            // Root branch is (l3, s2); the chain through s1 sits in between.
            CHECK(root_min == 3);
            REQUIRE(rtr.children[0].size() == 1);
            const auto mid = rtr.children[0][0];
            CHECK(mt.node(rtr.vertices[mid].top).id == 5);
            REQUIRE(rtr.children[mid].size() == 1);
            CHECK(mt.node(rtr.vertices[rtr.children[mid][0]].top).id == 4);
            ++paths;
        }
    }
    CHECK(stars == 2);
    CHECK(paths == 2);
}

TEST_CASE("decomposition invariants and counts on random trees") {
    Rng rng(17);
    for (int t = 0; t < 150; ++t) {
        const auto mt = random_merge_tree(rng, 6);
        const auto ds = enumerate_branch_decompositions(mt);
        CHECK(ds.size() == count_branch_decompositions(mt));
        CHECK(ds.size() == count_by_set_cover(mt));
        std::set<std::vector<std::pair<std::size_t, std::size_t>>> distinct;
        for (const auto& d : ds) {
            std::vector<std::pair<std::size_t, std::size_t>> key;
            std::map<std::size_t, int> edge_use;
            std::set<std::size_t> minima, touched;
            std::map<std::size_t, std::size_t> anchored;
            for (std::size_t b = 0; b < d.branches.size(); ++b) {
                const auto& path = d.paths[b];
                key.emplace_back(d.branches[b].minimum, d.branches[b].top);
                CHECK(path.front() == d.branches[b].top);
                CHECK(path.back() == d.branches[b].minimum);
                CHECK(minima.insert(d.branches[b].minimum).second);
                ++anchored[d.branches[b].top];
                for (std::size_t k = 0; k + 1 < path.size(); ++k) {
                    CHECK(mt.node(path[k + 1]).parent == path[k]);
                    ++edge_use[path[k + 1]];
                }
                touched.insert(path.begin(), path.end());
            }
            CHECK(d.branches[0].top == mt.root());
            CHECK(minima.size() == mt.leaf_count());
            CHECK(touched.size() == mt.size());
            CHECK(edge_use.size() == mt.size() - 1);
            for (const auto& [e, n] : edge_use) CHECK(n == 1);
            for (std::size_t v = 0; v < mt.size(); ++v) {
                if (mt.is_leaf(v) || v == mt.root()) continue;
                CHECK(anchored[v] == mt.children(v).size() - 1);
            }
            if (!mt.is_trivial()) CHECK(anchored[mt.root()] == mt.children(mt.root()).size());
            key.emplace_back(d.branches[0].minimum, d.branches[0].top);
            CHECK(distinct.insert(key).second);

            // The representation is a tree rooted at the designated branch.
            const auto rtr = rooted_tree_representation(mt, d);
            CHECK(rtr.parent[0] == 0);
            for (std::size_t b = 1; b < rtr.size(); ++b) {
                std::size_t steps = 0;
                for (auto v = b; v != 0 && steps <= rtr.size(); v = rtr.parent[v]) ++steps;
                CHECK(steps <= rtr.size());
            }
        }
    }
}

TEST_CASE("size guards") {
    Rng rng(1);
    MergeTree big;
    do big = random_merge_tree(rng, 16);
    while (big.leaf_count() <= kBaselineLeafLimit);
    CHECK_THROWS_AS(enumerate_branch_decompositions(big), SizeGuardError);
    CHECK_THROWS_AS(branching_distance(big, big, kBaseline), SizeGuardError);
    CHECK(branching_distance(big, big) == 0.0);  // optimized engine has no guard
    MergeTree six;
    do six = random_merge_tree(rng, 8);
    while (six.leaf_count() <= kBruteForceLeafLimit);
    CHECK_THROWS_AS(brute_force_distance(six, six), SizeGuardError);
    CHECK(parse_engine("baseline") == Engine::baseline);
    CHECK_THROWS_AS(parse_engine("magic"), InputError);
}

TEST_CASE("epsilon similarity") {
    const auto zero = MergeTree::trivial(0.0), three = MergeTree::trivial(3.0);
    for (auto engine : {Engine::optimized, Engine::baseline}) {
        CAPTURE(to_string(engine));
        CHECK(is_eps_similar(caterpillar(), caterpillar(), 0.0, engine));
        CHECK_FALSE(is_eps_similar(zero, three, 2.9, engine));
        CHECK(is_eps_similar(zero, three, 3.0, engine));
        const auto h = tree({{1, 5.5, 1}, {2, -7.5, 1}, {3, 0, 1}});
        CHECK(is_eps_similar(zero, h, 6.5, engine));
        CHECK_FALSE(is_eps_similar(zero, h, 6.49, engine));
    }
}

TEST_CASE("branching distance examples") {
    CHECK(branching_distance(caterpillar(), caterpillar()) == 0.0);
    CHECK(branching_distance(MergeTree::trivial(0), MergeTree::trivial(3)) == 3.0);
    CHECK(brute_force_distance(MergeTree::trivial(0), MergeTree::trivial(3)) == 3.0);
    CHECK(brute_force_distance(caterpillar(), caterpillar()) == 0.0);
}

TEST_CASE("triangle-inequality counterexample fixtures") {
    const auto x = load_merge_tree(testing::fixture("triangle_violation_x.json"));
    const auto y = load_merge_tree(testing::fixture("triangle_violation_y.json"));
    const auto z = load_merge_tree(testing::fixture("triangle_violation_z.json"));
    for (const auto& opts : {DistanceOptions{}, kBaseline}) {
        CHECK(branching_distance(x, y, opts) == 5.0);
        CHECK(branching_distance(y, z, opts) == 3.0);
        CHECK(branching_distance(x, z, opts) == 1.0);
    }
    CHECK(brute_force_distance(x, y) == 5.0);
    CHECK(brute_force_distance(y, z) == 3.0);
    CHECK(brute_force_distance(x, z) == 1.0);
    CHECK(branching_distance(x, y) > branching_distance(x, z) + branching_distance(z, y));

    // Side claims: removals are cheaper than any non-root matching for X vs Y,
    // and in X vs Z removing (h, g) costs at most the optimum while X's
    // branches cost more to remove than to match.
    const double rc_c = removal_cost(4, 10), rc_e = removal_cost(12.5, 13);
    CHECK(rc_c < matching_cost(4, 10, 12.5, 13));
    CHECK(rc_e < matching_cost(4, 10, 12.5, 13));
    CHECK(removal_cost(9, 10) <= 1.0);
    CHECK(removal_cost(7, 10) > matching_cost(7, 10, 6, 10));
    CHECK(removal_cost(4, 10) > matching_cost(4, 10, 5, 10));
}

TEST_CASE("exact distance equals brute force; tolerance mode within its width") {
    Rng rng(23);
    DistanceOptions tol{DistanceMode::tolerance, 1e-6, Engine::optimized};
    for (int t = 0; t < 150; ++t) {
        const auto x = random_merge_tree(rng, 3 + t % 3), y = random_merge_tree(rng, 3 + t % 3);
        const double d = branching_distance(x, y);
        CHECK(d == brute_force_distance(x, y));
        CHECK(d == branching_distance(x, y, kBaseline));
        const auto cand = distance_candidates(x, y);
        CHECK(std::binary_search(cand.begin(), cand.end(), d));
        CHECK(std::abs(branching_distance(x, y, tol) - d) <= 1e-6);
    }
}

TEST_CASE("symmetry, identity, positiveness, monotone decision") {
    Rng rng(29);
    for (int t = 0; t < 150; ++t) {
        const auto x = random_merge_tree(rng, 7), y = random_merge_tree(rng, 7);
        const double d = branching_distance(x, y);
        CHECK(d == branching_distance(y, x));
        CHECK(d >= 0.0);
        CHECK(branching_distance(x, x) == 0.0);
        CHECK((d == 0.0) == value_isomorphic(x, y));
        bool seen = false;
        for (double c : distance_candidates(x, y)) {
            const bool s = is_eps_similar(x, y, c);
            CHECK(!(seen && !s));
            seen = seen || s;
            if (s) CHECK(c >= d);
        }
    }
}

TEST_CASE("shifts") {
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        const auto x = random_merge_tree(rng, 6), y = random_merge_tree(rng, 6);
        const double d = branching_distance(x, y), c = 0.25 * (t % 17) - 2.0;
        CHECK(branching_distance(x.shifted(c), y.shifted(c)) == d);
        CHECK(std::abs(branching_distance(x.shifted(c), y) - d) <= std::abs(c));
    }
}

TEST_CASE("representation-level brute force agrees with the decision procedure") {
    Rng rng(37);
    for (int t = 0; t < 40; ++t) {
        const auto x = random_merge_tree(rng, 4), y = random_merge_tree(rng, 4);
        const auto dx = enumerate_branch_decompositions(x), dy = enumerate_branch_decompositions(y);
        const auto rx = rooted_tree_representation(x, dx.front()), ry = rooted_tree_representation(y, dy.back());
        const double best = brute_force_representation_distance(rx, ry);
        CHECK(representations_eps_similar(rx, ry, best));
        for (double c : distance_candidates(x, y))
            if (c < best) CHECK_FALSE(representations_eps_similar(rx, ry, c));
    }
}
