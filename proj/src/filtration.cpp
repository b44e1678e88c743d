#include "abdkit/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace abdkit {

namespace {

constexpr double kAxisSnap = 1e-15;

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

// One contraction pass; returns false when nothing was merged.
bool collapse_once(ScalarGraph& sg, double tol) {
    const std::size_t n = sg.vertices.size();
    std::unordered_map<VertexId, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos.emplace(sg.vertices[i].id, i);

    DisjointSets sets(n);
    bool merged = false;
    for (const auto& e : sg.edges) {
        auto a = pos.at(e.u), b = pos.at(e.v);
        if (std::abs(sg.vertices[a].value - sg.vertices[b].value) <= tol) merged |= sets.unite(a, b);
    }
    if (!merged) return false;

    // Representative of each class: the member with the smallest id.
    std::vector<std::size_t> best(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = sets.find(i);
        if (best[r] == n || sg.vertices[i].id < sg.vertices[best[r]].id) best[r] = i;
    }
    std::vector<ScalarVertex> vs;
    std::unordered_map<std::size_t, VertexId> class_id;
    for (std::size_t i = 0; i < n; ++i) {
        auto r = sets.find(i);
        if (best[r] == i) {
            vs.push_back(sg.vertices[i]);
            class_id.emplace(r, sg.vertices[i].id);
        }
    }
    std::vector<Edge> es;
    for (const auto& e : sg.edges) {
        auto a = class_id.at(sets.find(pos.at(e.u)));
        auto b = class_id.at(sets.find(pos.at(e.v)));
        if (a != b) es.push_back(Edge{std::min(a, b), std::max(a, b)});
    }
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    sg.vertices = std::move(vs);
    sg.edges = std::move(es);
    return true;
}

}  // namespace

std::vector<std::vector<std::size_t>> ScalarGraph::adjacency() const {
    std::unordered_map<VertexId, std::size_t> pos;
    for (std::size_t i = 0; i < vertices.size(); ++i) pos.emplace(vertices[i].id, i);
    std::vector<std::vector<std::size_t>> adj(vertices.size());
    for (const auto& e : edges) {
        auto a = pos.at(e.u), b = pos.at(e.v);
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

std::size_t ScalarGraph::index_of(VertexId id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].id == id) return i;
    throw InputError("unknown vertex id " + std::to_string(id));
}

ScalarGraph ScalarGraph::make(std::vector<ScalarVertex> vertices, std::vector<std::pair<VertexId, VertexId>> edges) {
    std::unordered_set<VertexId> ids;
    for (const auto& v : vertices)
        if (!ids.insert(v.id).second) throw InputError("duplicate vertex id " + std::to_string(v.id));
    ScalarGraph sg;
    sg.vertices = std::move(vertices);
    for (auto [u, v] : edges) {
        if (!ids.count(u) || !ids.count(v)) throw InputError("dangling edge endpoint");
        if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
        sg.edges.push_back(Edge{std::min(u, v), std::max(u, v)});
    }
    std::sort(sg.edges.begin(), sg.edges.end());
    sg.edges.erase(std::unique(sg.edges.begin(), sg.edges.end()), sg.edges.end());
    return sg;
}

Direction direction_at(double omega) {
    double c = std::cos(omega), s = std::sin(omega);
    if (std::abs(c) < kAxisSnap) {
        c = 0.0;
        s = s > 0 ? 1.0 : -1.0;
    } else if (std::abs(s) < kAxisSnap) {
        s = 0.0;
        c = c > 0 ? 1.0 : -1.0;
    }
    return {c, s};
}

ScalarGraph direction_filter(const EmbeddedGraph& g, double omega) {
    const auto dir = direction_at(omega);
    ScalarGraph sg;
    sg.angle = omega;
    sg.vertices.reserve(g.vertex_count());
    for (const auto& v : g.vertices()) sg.vertices.push_back({v.id, v.x * dir.cx + v.y * dir.cy});
    sg.edges = g.edges();
    return sg;
}

ScalarGraph collapse_equal_adjacent(const ScalarGraph& sg, double tol) {
    ScalarGraph out = sg;
    while (collapse_once(out, tol)) {
    }
    return out;
}

bool is_connected(const ScalarGraph& sg) {
    if (sg.vertices.empty()) return true;
    const auto adj = sg.adjacency();
    std::vector<char> seen(sg.vertices.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == sg.vertices.size();
}

}  // namespace abdkit
