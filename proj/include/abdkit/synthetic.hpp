#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "abdkit/graph.hpp"
#include "abdkit/merge_tree.hpp"

namespace abdkit {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Random tail-less merge tree with 1..max_leaves leaves. Values lie on a
/// half-integer grid so coincident values across trees are common.
MergeTree random_merge_tree(Rng& rng, std::size_t max_leaves);

/// Random connected graph with 1..max_vertices vertices and pairwise
/// distinct values (generic input for merge-tree construction).
ScalarGraph random_scalar_graph(Rng& rng, std::size_t max_vertices);

/// Random connected embedded graph (spanning tree plus a few chords).
EmbeddedGraph random_embedded_graph(Rng& rng, std::size_t max_vertices);

/// Cycle graph on `n` points of a random ellipse, in angular order.
EmbeddedGraph random_convex_polygon(Rng& rng, std::size_t n);

/// Regular n-gon of circumradius r centred at the origin.
EmbeddedGraph regular_polygon(std::size_t n, double r = 1.0);

/// star, comb and zigzag are noisy skeleton classes; blob is a smooth closed
/// curve and stroke a smooth open curve, both drawn at random per instance.
enum class ShapeClass { star, comb, zigzag, blob, stroke };

std::string to_string(ShapeClass c);
ShapeClass parse_shape_class(const std::string& name);

/// Noisy instance of a shape class. Every vertex is jittered by Gaussian
/// noise of standard deviation `noise` (relative to a unit-sized shape).
EmbeddedGraph synthetic_shape(ShapeClass c, Rng& rng, double noise = 0.03);

struct LabelledGraph {
    std::string name;
    std::string label;
    EmbeddedGraph graph;
};

/// `per_class` instances of each requested class, named "<class>_<k>".
std::vector<LabelledGraph> synthetic_dataset(const std::vector<ShapeClass>& classes, std::size_t per_class, std::uint64_t seed,
                                             double noise = 0.03);

}  // namespace abdkit
