#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "abdkit/filtration.hpp"

namespace abdkit {

using NodeId = std::int64_t;

struct MergeTreeNode {
    NodeId id;
    double value;
    std::size_t parent;                // index into MergeTree::nodes(); the root points at itself
    std::optional<VertexId> source;    // graph vertex that created the node, if any

    friend bool operator==(const MergeTreeNode&, const MergeTreeNode&) = default;
};

/// Tail-less merge tree.
///
/// Leaves are the minima, internal nodes are merges with at least two
/// children, and the root is the last merge (or the only minimum, for a
/// trivial tree). There is no upward tail above the root.
class MergeTree {
public:
    MergeTree() = default;

    /// Validates the tree invariants and throws InputError if any fails:
    /// unique ids, one root, connected, parent strictly above child,
    /// every internal node with >= 2 children.
    static MergeTree make(std::vector<MergeTreeNode> nodes);

    /// Single-node tree.
    static MergeTree trivial(double value, NodeId id = 0);

    const std::vector<MergeTreeNode>& nodes() const { return nodes_; }
    const MergeTreeNode& node(std::size_t i) const { return nodes_[i]; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t root() const { return root_; }
    const std::vector<std::size_t>& children(std::size_t i) const { return children_[i]; }
    bool is_leaf(std::size_t i) const { return children_[i].empty(); }
    bool is_trivial() const { return nodes_.size() == 1; }
    std::vector<std::size_t> leaves() const;
    std::size_t leaf_count() const;
    double value(std::size_t i) const { return nodes_[i].value; }
    std::vector<double> values() const;
    std::size_t index_of(NodeId id) const;

    /// Same structure with every value moved by `delta`.
    MergeTree shifted(double delta) const;

    friend bool operator==(const MergeTree& a, const MergeTree& b) { return a.nodes_ == b.nodes_; }

private:
    std::vector<MergeTreeNode> nodes_;
    std::vector<std::vector<std::size_t>> children_;
    std::size_t root_ = 0;
};

/// Sweep construction: vertices processed by ascending (value, id), with
/// union-find child pointers on graph vertices and parent pointers on tree
/// nodes. Requires a connected graph with distinct values on adjacent
/// vertices; throws InputError otherwise.
MergeTree compute_merge_tree(const ScalarGraph& sg);

/// Reference construction that evaluates the sublevel-set definition
/// directly at every distinct value. Quadratic or worse; meant for testing.
MergeTree merge_tree_oracle(const ScalarGraph& sg);

/// Identified components of the closed (`closed == true`) or open sublevel
/// set at `level`: one set of minima per connected component.
std::set<std::set<VertexId>> identified_components(const ScalarGraph& sg, double level, bool closed);

enum class Centering { median, mean };

Centering parse_centering(const std::string& name);
std::string to_string(Centering c);

/// Median (midpoint of the central pair for even counts) or mean of the node values.
double center_of(const MergeTree& mt, Centering mode);

/// Shifts every node value so the chosen statistic of node values is zero.
MergeTree shift_median_zero(const MergeTree& mt, Centering mode = Centering::median);

/// Number of vertices with no strictly lower neighbour.
std::size_t count_local_minima(const ScalarGraph& sg);

/// Canonical string of the rooted, value-labelled tree; equal strings mean a
/// value-preserving isomorphism exists.
std::string canonical_form(const MergeTree& mt);
bool value_isomorphic(const MergeTree& a, const MergeTree& b);

// Merge-tree JSON: {"nodes":[{"id":int,"value":float}],"parent":{"id":id}}
std::string merge_tree_to_json(const MergeTree& mt);
MergeTree parse_merge_tree_json(const std::string& text);
MergeTree load_merge_tree(const std::filesystem::path& path);
void write_merge_tree(const MergeTree& mt, const std::filesystem::path& path);

}  // namespace abdkit
