#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "abdkit/error.hpp"

namespace abdkit {

using VertexId = std::int64_t;

struct Vertex {
    VertexId id;
    double x;
    double y;

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Undirected edge stored with `u < v`.
struct Edge {
    VertexId u;
    VertexId v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A graph whose vertices carry planar coordinates.
///
/// Instances built through `EmbeddedGraph::make` (and every loader) satisfy:
/// unique vertex ids, no self-loops, no parallel edges, every endpoint exists.
/// Vertex order is preserved as given; edges are kept sorted.
class EmbeddedGraph {
public:
    EmbeddedGraph() = default;

    /// Validates and normalizes raw input. Throws InputError on dangling
    /// endpoints, self-loops, duplicate vertex ids or an empty vertex set.
    static EmbeddedGraph make(std::vector<Vertex> vertices, std::vector<std::pair<VertexId, VertexId>> edges);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    /// Position of `id` in vertices(); throws InputError if absent.
    std::size_t index_of(VertexId id) const;

    /// Adjacency lists indexed by vertex position.
    std::vector<std::vector<std::size_t>> adjacency() const;

    friend bool operator==(const EmbeddedGraph&, const EmbeddedGraph&) = default;

private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
};

enum class GraphFormat { json, edgelist };

GraphFormat parse_graph_format(const std::string& name);

EmbeddedGraph load_graph(const std::filesystem::path& path, GraphFormat format = GraphFormat::json);
EmbeddedGraph parse_graph_json(const std::string& text);
EmbeddedGraph parse_graph_edgelist(const std::string& text);

void write_graph(const EmbeddedGraph& g, const std::filesystem::path& path, GraphFormat format = GraphFormat::json);
std::string graph_to_json(const EmbeddedGraph& g);
std::string graph_to_edgelist(const EmbeddedGraph& g);

/// Induced subgraph on the largest connected component. Size ties go to the
/// component holding the smallest vertex id.
EmbeddedGraph largest_component(const EmbeddedGraph& g);

bool is_connected(const EmbeddedGraph& g);

/// Combinatorial isomorphism (adjacency only, coordinates ignored).
bool are_isomorphic(const EmbeddedGraph& a, const EmbeddedGraph& b);

/// Rigid transforms, used by property tests and synthetic generators.
EmbeddedGraph translated(const EmbeddedGraph& g, double dx, double dy);
EmbeddedGraph rotated(const EmbeddedGraph& g, double angle);

}  // namespace abdkit
