#include "abdkit/abd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace abdkit {

FrameSet frame_angles(std::size_t n) {
    if (n == 0) throw InputError("frame count must be at least 1");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    FrameSet fs;
    fs.angles.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double w = std::numbers::pi / 2.0 + two_pi * static_cast<double>(i) / static_cast<double>(n);
        w = std::fmod(w, two_pi);
        if (w < 0) w += two_pi;
        fs.angles.push_back(w);
    }
    return fs;
}

MergeTree frame_tree(const EmbeddedGraph& g, double omega, const AbdOptions& opts) {
    const auto sg = collapse_equal_adjacent(direction_filter(g, omega), opts.collapse_tolerance);
    return shift_median_zero(compute_merge_tree(sg), opts.normalization);
}

std::vector<MergeTree> frame_trees(const EmbeddedGraph& g, const FrameSet& frames, const AbdOptions& opts) {
    const auto connected = largest_component(g);
    std::vector<MergeTree> out;
    out.reserve(frames.size());
    for (double w : frames.angles) out.push_back(frame_tree(connected, w, opts));
    return out;
}

double aggregate(std::vector<double> values, Centering mode) {
    if (values.empty()) throw InputError("cannot aggregate an empty set of distances");
    std::sort(values.begin(), values.end());
    if (mode == Centering::mean) return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    const auto k = values.size();
    return k % 2 == 1 ? values[k / 2] : (values[k / 2 - 1] + values[k / 2]) / 2.0;
}

AbdResult average_branching_distance_detailed(const std::vector<MergeTree>& trees_g, const std::vector<MergeTree>& trees_h,
                                              const AbdOptions& opts) {
    if (trees_g.size() != trees_h.size() || trees_g.empty()) throw InputError("frame tree lists must be non-empty and equally long");
    AbdResult r;
    r.per_frame.reserve(trees_g.size());
    for (std::size_t i = 0; i < trees_g.size(); ++i) r.per_frame.push_back(branching_distance(trees_g[i], trees_h[i], opts.distance));
    r.value = aggregate(r.per_frame, opts.average);
    return r;
}

AbdResult average_branching_distance_detailed(const EmbeddedGraph& g, const EmbeddedGraph& h, const AbdOptions& opts) {
    const auto frames = frame_angles(opts.frames);
    return average_branching_distance_detailed(frame_trees(g, frames, opts), frame_trees(h, frames, opts), opts);
}

double average_branching_distance(const EmbeddedGraph& g, const EmbeddedGraph& h, const AbdOptions& opts) {
    return average_branching_distance_detailed(g, h, opts).value;
}

}  // namespace abdkit
