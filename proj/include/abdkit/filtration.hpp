#pragma once

#include <string>
#include <vector>

#include "abdkit/graph.hpp"

namespace abdkit {

inline constexpr double kDefaultCollapseTolerance = 1e-9;

struct ScalarVertex {
    VertexId id;
    double value;

    friend bool operator==(const ScalarVertex&, const ScalarVertex&) = default;
};

/// A graph with one real value per vertex, e.g. the height function of an
/// embedded graph in a fixed direction.
struct ScalarGraph {
    std::vector<ScalarVertex> vertices;
    std::vector<Edge> edges;  // u < v, sorted, unique
    std::string source;       // optional label of the originating graph
    double angle = 0.0;       // direction the values were taken in (radians)

    std::vector<std::vector<std::size_t>> adjacency() const;
    std::size_t index_of(VertexId id) const;

    /// Builds a ScalarGraph from raw parts, validating endpoints and dropping
    /// duplicate edges. Throws InputError on self-loops or dangling endpoints.
    static ScalarGraph make(std::vector<ScalarVertex> vertices, std::vector<std::pair<VertexId, VertexId>> edges);
};

/// Unit vector at `omega`, with rounding residue on the axes snapped to zero
/// so that quarter turns give exact coordinate projections.
struct Direction {
    double cx;
    double cy;
};
Direction direction_at(double omega);

/// value(v) = x cos(omega) + y sin(omega).
ScalarGraph direction_filter(const EmbeddedGraph& g, double omega);

/// Contracts every maximal set of vertices joined by edges whose endpoint
/// values differ by at most `tol`. The merged vertex keeps the smallest id in
/// its set and that vertex's value. Repeats until no such edge remains, so the
/// result is a fixed point.
ScalarGraph collapse_equal_adjacent(const ScalarGraph& sg, double tol = kDefaultCollapseTolerance);

bool is_connected(const ScalarGraph& sg);

}  // namespace abdkit
