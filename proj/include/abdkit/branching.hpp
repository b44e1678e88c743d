#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "abdkit/merge_tree.hpp"

namespace abdkit {

/// A (minimum, saddle-or-root) pair of a merge tree. Node fields are indices
/// into the owning MergeTree.
struct Branch {
    std::size_t minimum;
    std::size_t top;
    double min_value;
    double top_value;

    bool degenerate() const { return minimum == top; }
    friend bool operator==(const Branch&, const Branch&) = default;
};

/// max(|m_u - m_v|, |s_u - s_v|)
double matching_cost(const Branch& u, const Branch& v);
/// |m_u - s_u| / 2
double removal_cost(const Branch& u);

// Value-level forms; the Branch overloads forward to these so every engine
// produces bit-identical costs.
double matching_cost(double min_u, double top_u, double min_v, double top_v);
double removal_cost(double min_value, double top_value);

/// Edge-disjoint descending paths covering a merge tree, one per branch.
///
/// branches[0] is the designated root branch. paths[i] lists node indices of
/// branch i from its top down to its minimum.
struct BranchDecomposition {
    std::vector<Branch> branches;
    std::vector<std::vector<std::size_t>> paths;
};

/// Tree of branches. The designated root branch (index 0) is the root; every
/// other branch hangs below the branch whose path carries its top through
/// (or below the root branch, when its top is the tree root).
struct RootedTreeRep {
    std::vector<Branch> vertices;
    std::vector<std::size_t> parent;  // parent[0] == 0
    std::vector<std::vector<std::size_t>> children;
    std::vector<std::size_t> root_branches;  // vertices whose top is the tree root

    std::size_t size() const { return vertices.size(); }
};

inline constexpr std::size_t kBaselineLeafLimit = 12;
inline constexpr std::size_t kBruteForceLeafLimit = 5;

/// Every branch decomposition with a designated root branch, exactly once.
/// A decomposition is fixed by picking, at every internal node, the child
/// whose chain continues through it (at the root: the root branch's chain).
/// Order is lexicographic in the chosen child ids, internal nodes taken in
/// index order. Throws SizeGuardError above `max_leaves` leaves.
std::vector<BranchDecomposition> enumerate_branch_decompositions(const MergeTree& mt,
                                                                 std::size_t max_leaves = kBaselineLeafLimit);

/// Number of decompositions enumerate_branch_decompositions would produce.
std::size_t count_branch_decompositions(const MergeTree& mt);

RootedTreeRep rooted_tree_representation(const MergeTree& mt, const BranchDecomposition& bd);

enum class Engine { optimized, baseline };

std::string to_string(Engine e);
Engine parse_engine(const std::string& name);

/// True iff some pair of rooted tree representations admits a valid matching
/// whose matching and removal costs are all <= eps.
bool is_eps_similar(const MergeTree& x, const MergeTree& y, double eps, Engine engine = Engine::optimized);

/// Decision on one fixed pair of representations (baseline recursion).
bool representations_eps_similar(const RootedTreeRep& rx, const RootedTreeRep& ry, double eps);

/// Sorted, de-duplicated set of values the distance can take: pairwise value
/// differences over both trees, every half branch length, and zero.
std::vector<double> distance_candidates(const MergeTree& x, const MergeTree& y);

enum class DistanceMode { exact, tolerance };

struct DistanceOptions {
    DistanceMode mode = DistanceMode::exact;
    double tolerance = 1e-6;  // bisection width in tolerance mode
    Engine engine = Engine::optimized;
};

/// Branching distance. Exact mode bisects the candidate set and returns the
/// smallest feasible candidate; tolerance mode bisects [0, max candidate]
/// down to `tolerance` and returns the feasible end.
double branching_distance(const MergeTree& x, const MergeTree& y, const DistanceOptions& opts = {});

/// Exhaustive min-max over all representation pairs and all valid matchings.
/// Independent of the decision procedures; limited to kBruteForceLeafLimit leaves.
double brute_force_distance(const MergeTree& x, const MergeTree& y);

/// Smallest achievable max-cost for one fixed pair of representations, by exhaustion.
double brute_force_representation_distance(const RootedTreeRep& rx, const RootedTreeRep& ry);

}  // namespace abdkit
