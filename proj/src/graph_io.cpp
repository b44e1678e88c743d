#include "abdkit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace abdkit {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw Error("write failed for " + path.string());
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Components as lists of vertex positions, in order of first appearance.
std::vector<std::vector<std::size_t>> components(const EmbeddedGraph& g) {
    const auto adj = g.adjacency();
    std::vector<int> seen(g.vertex_count(), 0);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < g.vertex_count(); ++s) {
        if (seen[s]) continue;
        std::vector<std::size_t> comp{s};
        seen[s] = 1;
        for (std::size_t head = 0; head < comp.size(); ++head) {
            for (auto w : adj[comp[head]]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
            }
        }
        out.push_back(std::move(comp));
    }
    return out;
}

}  // namespace

EmbeddedGraph EmbeddedGraph::make(std::vector<Vertex> vertices, std::vector<std::pair<VertexId, VertexId>> edges) {
    if (vertices.empty()) throw InputError("empty vertex set");
    std::unordered_set<VertexId> ids;
    for (const auto& v : vertices) {
        if (!ids.insert(v.id).second) throw InputError("duplicate vertex id " + std::to_string(v.id));
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            throw InputError("non-finite coordinate on vertex " + std::to_string(v.id));
    }
    std::vector<Edge> norm;
    norm.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (!ids.count(u) || !ids.count(v))
            throw InputError("dangling edge endpoint in (" + std::to_string(u) + ", " + std::to_string(v) + ")");
        if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
        norm.push_back(Edge{std::min(u, v), std::max(u, v)});
    }
    std::sort(norm.begin(), norm.end());
    norm.erase(std::unique(norm.begin(), norm.end()), norm.end());

    EmbeddedGraph g;
    g.vertices_ = std::move(vertices);
    g.edges_ = std::move(norm);
    return g;
}

std::size_t EmbeddedGraph::index_of(VertexId id) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i].id == id) return i;
    throw InputError("unknown vertex id " + std::to_string(id));
}

std::vector<std::vector<std::size_t>> EmbeddedGraph::adjacency() const {
    std::unordered_map<VertexId, std::size_t> pos;
    pos.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) pos.emplace(vertices_[i].id, i);
    std::vector<std::vector<std::size_t>> adj(vertices_.size());
    for (const auto& e : edges_) {
        auto a = pos.at(e.u), b = pos.at(e.v);
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

GraphFormat parse_graph_format(const std::string& name) {
    if (name == "json") return GraphFormat::json;
    if (name == "edgelist") return GraphFormat::edgelist;
    throw InputError("unknown graph format '" + name + "' (expected json or edgelist)");
}

EmbeddedGraph parse_graph_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("parse failure: ") + e.what());
    }
    try {
        std::vector<Vertex> vertices;
        for (const auto& v : doc.at("vertices"))
            vertices.push_back(Vertex{v.at("id").get<VertexId>(), v.at("x").get<double>(), v.at("y").get<double>()});
        std::vector<std::pair<VertexId, VertexId>> edges;
        if (doc.contains("edges")) {
            for (const auto& e : doc.at("edges")) {
                if (!e.is_array() || e.size() != 2) throw InputError("parse failure: edge must be a pair");
                edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
            }
        }
        return EmbeddedGraph::make(std::move(vertices), std::move(edges));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("parse failure: ") + e.what());
    }
}

EmbeddedGraph parse_graph_edgelist(const std::string& text) {
    std::vector<Vertex> vertices;
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            // "# id x y" declares a vertex; any other comment is ignored.
            std::istringstream ls(line.substr(first + 1));
            VertexId id;
            double x, y;
            std::string rest;
            if (ls >> id >> x >> y && !(ls >> rest)) vertices.push_back(Vertex{id, x, y});
            continue;
        }
        std::istringstream ls(line);
        VertexId u, v;
        std::string rest;
        if (!(ls >> u >> v) || (ls >> rest))
            throw InputError("parse failure: line " + std::to_string(lineno) + " is not an edge 'u v'");
        edges.emplace_back(u, v);
    }
    return EmbeddedGraph::make(std::move(vertices), std::move(edges));
}

EmbeddedGraph load_graph(const std::filesystem::path& path, GraphFormat format) {
    const auto text = read_file(path);
    return format == GraphFormat::json ? parse_graph_json(text) : parse_graph_edgelist(text);
}

std::string graph_to_json(const EmbeddedGraph& g) {
    nlohmann::json doc;
    doc["vertices"] = nlohmann::json::array();
    for (const auto& v : g.vertices()) doc["vertices"].push_back({{"id", v.id}, {"x", v.x}, {"y", v.y}});
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges()) doc["edges"].push_back({e.u, e.v});
    return doc.dump() + "\n";
}

std::string graph_to_edgelist(const EmbeddedGraph& g) {
    std::string out;
    for (const auto& v : g.vertices())
        out += "# " + std::to_string(v.id) + " " + format_double(v.x) + " " + format_double(v.y) + "\n";
    for (const auto& e : g.edges()) out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    return out;
}

void write_graph(const EmbeddedGraph& g, const std::filesystem::path& path, GraphFormat format) {
    write_file(path, format == GraphFormat::json ? graph_to_json(g) : graph_to_edgelist(g));
}

bool is_connected(const EmbeddedGraph& g) { return components(g).size() <= 1; }

EmbeddedGraph largest_component(const EmbeddedGraph& g) {
    if (g.vertex_count() == 0) throw InputError("empty graph");
    const auto comps = components(g);
    if (comps.size() == 1) return g;

    auto min_id = [&](const std::vector<std::size_t>& c) {
        VertexId m = g.vertices()[c.front()].id;
        for (auto i : c) m = std::min(m, g.vertices()[i].id);
        return m;
    };
    const std::vector<std::size_t>* best = &comps.front();
    for (const auto& c : comps) {
        if (c.size() > best->size() || (c.size() == best->size() && min_id(c) < min_id(*best))) best = &c;
    }

    std::vector<char> keep(g.vertex_count(), 0);
    for (auto i : *best) keep[i] = 1;
    std::vector<Vertex> vs;
    std::unordered_set<VertexId> kept_ids;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        if (keep[i]) {
            vs.push_back(g.vertices()[i]);
            kept_ids.insert(g.vertices()[i].id);
        }
    }
    std::vector<std::pair<VertexId, VertexId>> es;
    for (const auto& e : g.edges())
        if (kept_ids.count(e.u)) es.emplace_back(e.u, e.v);
    return EmbeddedGraph::make(std::move(vs), std::move(es));
}

bool are_isomorphic(const EmbeddedGraph& a, const EmbeddedGraph& b) {
    const std::size_t n = a.vertex_count();
    if (n != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
    const auto adj_a = a.adjacency();
    const auto adj_b = b.adjacency();

    // Iterated degree refinement gives colour classes that any isomorphism must respect.
    auto refine = [](const std::vector<std::vector<std::size_t>>& adj_x, const std::vector<std::vector<std::size_t>>& adj_y,
                     std::vector<int>& col_x, std::vector<int>& col_y) {
        const std::size_t n = adj_x.size();
        col_x.assign(n, 0);
        col_y.assign(n, 0);
        for (std::size_t round = 0; round <= n; ++round) {
            std::map<std::vector<int>, int> palette;
            auto signature = [&](const std::vector<std::vector<std::size_t>>& adj, const std::vector<int>& col, std::size_t v) {
                std::vector<int> sig{col[v]};
                std::vector<int> nb;
                for (auto w : adj[v]) nb.push_back(col[w]);
                std::sort(nb.begin(), nb.end());
                sig.insert(sig.end(), nb.begin(), nb.end());
                return sig;
            };
            std::vector<std::vector<int>> sx(n), sy(n);
            for (std::size_t v = 0; v < n; ++v) {
                sx[v] = signature(adj_x, col_x, v);
                sy[v] = signature(adj_y, col_y, v);
                palette.emplace(sx[v], 0);
                palette.emplace(sy[v], 0);
            }
            int next = 0;
            for (auto& [sig, c] : palette) c = next++;
            std::vector<int> nx(n), ny(n);
            for (std::size_t v = 0; v < n; ++v) {
                nx[v] = palette[sx[v]];
                ny[v] = palette[sy[v]];
            }
            const bool stable = std::set<int>(nx.begin(), nx.end()).size() == std::set<int>(col_x.begin(), col_x.end()).size();
            col_x = std::move(nx);
            col_y = std::move(ny);
            if (stable && round > 0) break;
        }
    };

    std::vector<int> col_a, col_b;
    refine(adj_a, adj_b, col_a, col_b);
    {
        auto sa = col_a, sb = col_b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return false;
    }

    std::vector<std::set<std::size_t>> nb_b(n);
    for (std::size_t v = 0; v < n; ++v) nb_b[v] = {adj_b[v].begin(), adj_b[v].end()};

    std::vector<long> map_ab(n, -1);
    std::vector<char> used(n, 0);
    std::function<bool(std::size_t)> extend = [&](std::size_t v) -> bool {
        if (v == n) return true;
        for (std::size_t w = 0; w < n; ++w) {
            if (used[w] || col_a[v] != col_b[w]) continue;
            bool ok = true;
            for (auto u : adj_a[v]) {
                if (u < v && !nb_b[w].count(static_cast<std::size_t>(map_ab[u]))) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            map_ab[v] = static_cast<long>(w);
            used[w] = 1;
            if (extend(v + 1)) return true;
            used[w] = 0;
            map_ab[v] = -1;
        }
        return false;
    };
    // Edge counts match and every a-edge maps onto a b-edge, so the map is an isomorphism.
    return extend(0);
}

EmbeddedGraph translated(const EmbeddedGraph& g, double dx, double dy) {
    std::vector<Vertex> vs = g.vertices();
    for (auto& v : vs) {
        v.x += dx;
        v.y += dy;
    }
    std::vector<std::pair<VertexId, VertexId>> es;
    for (const auto& e : g.edges()) es.emplace_back(e.u, e.v);
    return EmbeddedGraph::make(std::move(vs), std::move(es));
}

EmbeddedGraph rotated(const EmbeddedGraph& g, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    std::vector<Vertex> vs = g.vertices();
    for (auto& v : vs) {
        const double x = v.x, y = v.y;
        v.x = c * x - s * y;
        v.y = s * x + c * y;
    }
    std::vector<std::pair<VertexId, VertexId>> es;
    for (const auto& e : g.edges()) es.emplace_back(e.u, e.v);
    return EmbeddedGraph::make(std::move(vs), std::move(es));
}

}  // namespace abdkit
