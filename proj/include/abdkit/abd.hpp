#pragma once

#include <vector>

#include "abdkit/branching.hpp"
#include "abdkit/graph.hpp"
#include "abdkit/merge_tree.hpp"

namespace abdkit {

/// n evenly spaced directions starting at pi/2, each wrapped into [0, 2pi).
struct FrameSet {
    std::vector<double> angles;

    std::size_t size() const { return angles.size(); }
};

FrameSet frame_angles(std::size_t n);

struct AbdOptions {
    std::size_t frames = 10;
    Centering average = Centering::median;        // aggregation over frames
    Centering normalization = Centering::median;  // per-tree shift before comparing
    DistanceOptions distance{};
    double collapse_tolerance = kDefaultCollapseTolerance;
};

/// Normalized merge tree of `g` seen in direction `omega`. `g` must be connected.
MergeTree frame_tree(const EmbeddedGraph& g, double omega, const AbdOptions& opts = {});

/// One normalized tree per frame, for reuse across many comparisons.
/// Disconnected graphs are reduced to their largest component first.
std::vector<MergeTree> frame_trees(const EmbeddedGraph& g, const FrameSet& frames, const AbdOptions& opts = {});

/// Median (midpoint of the central pair for even counts) or mean; the values
/// are sorted first so the result does not depend on their order.
double aggregate(std::vector<double> values, Centering mode);

struct AbdResult {
    double value = 0.0;
    std::vector<double> per_frame;  // in frame order
};

AbdResult average_branching_distance_detailed(const std::vector<MergeTree>& trees_g, const std::vector<MergeTree>& trees_h,
                                              const AbdOptions& opts = {});

AbdResult average_branching_distance_detailed(const EmbeddedGraph& g, const EmbeddedGraph& h, const AbdOptions& opts = {});

double average_branching_distance(const EmbeddedGraph& g, const EmbeddedGraph& h, const AbdOptions& opts = {});

}  // namespace abdkit
