#include "abdkit/merge_tree.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace abdkit {

// ---------------------------------------------------------------------------
// MergeTree

MergeTree MergeTree::make(std::vector<MergeTreeNode> nodes) {
    if (nodes.empty()) throw InputError("merge tree has no nodes");
    const std::size_t n = nodes.size();
    std::unordered_set<NodeId> ids;
    for (const auto& nd : nodes) {
        if (!ids.insert(nd.id).second) throw InputError("duplicate merge tree node id " + std::to_string(nd.id));
        if (nd.parent >= n) throw InputError("merge tree parent out of range");
        if (!std::isfinite(nd.value)) throw InputError("non-finite merge tree value");
    }

    MergeTree mt;
    mt.children_.assign(n, {});
    std::size_t roots = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (nodes[i].parent == i) {
            ++roots;
            mt.root_ = i;
        } else {
            mt.children_[nodes[i].parent].push_back(i);
            if (!(nodes[nodes[i].parent].value > nodes[i].value))
                throw InputError("merge tree node " + std::to_string(nodes[i].id) + " is not strictly below its parent");
        }
    }
    if (roots != 1) throw InputError("merge tree must have exactly one root");

    // Strict value increase along parent links rules out cycles; check reachability.
    std::vector<std::size_t> stack{mt.root_};
    std::size_t seen = 0;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        ++seen;
        for (auto c : mt.children_[v]) stack.push_back(c);
    }
    if (seen != n) throw InputError("merge tree is not connected");
    for (std::size_t i = 0; i < n; ++i) {
        if (mt.children_[i].size() == 1)
            throw InputError("merge tree node " + std::to_string(nodes[i].id) + " has a single child (tail-less trees have none)");
    }
    mt.nodes_ = std::move(nodes);
    return mt;
}

MergeTree MergeTree::trivial(double value, NodeId id) {
    return make({MergeTreeNode{id, value, 0, std::nullopt}});
}

std::vector<std::size_t> MergeTree::leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (children_[i].empty()) out.push_back(i);
    return out;
}

std::size_t MergeTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(children_.begin(), children_.end(), [](const auto& c) { return c.empty(); }));
}

std::vector<double> MergeTree::values() const {
    std::vector<double> out;
    out.reserve(nodes_.size());
    for (const auto& nd : nodes_) out.push_back(nd.value);
    return out;
}

std::size_t MergeTree::index_of(NodeId id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].id == id) return i;
    throw InputError("unknown merge tree node " + std::to_string(id));
}

MergeTree MergeTree::shifted(double delta) const {
    MergeTree out = *this;
    for (auto& nd : out.nodes_) nd.value += delta;
    return out;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

void require_generic_connected(const ScalarGraph& sg) {
    if (sg.vertices.empty()) throw InputError("empty scalar graph");
    std::unordered_map<VertexId, double> value;
    for (const auto& v : sg.vertices) value.emplace(v.id, v.value);
    for (const auto& e : sg.edges) {
        if (value.at(e.u) == value.at(e.v))
            throw InputError("adjacent vertices " + std::to_string(e.u) + " and " + std::to_string(e.v) +
                             " share a value; run collapse_equal_adjacent first");
    }
    if (!is_connected(sg)) throw InputError("scalar graph is disconnected; pass its largest component");
}

// Tree nodes under construction; `alive` goes false when a node is absorbed
// into an equal-valued merge created later at the same level.
struct Builder {
    std::vector<MergeTreeNode> nodes;
    std::vector<char> alive;

    std::size_t add(NodeId id, double value) {
        const auto i = nodes.size();
        nodes.push_back({id, value, i, id});
        alive.push_back(1);
        return i;
    }

    std::size_t root_of(std::size_t i) const {
        while (nodes[i].parent != i) i = nodes[i].parent;
        return i;
    }

    MergeTree finish() {
        std::vector<std::size_t> remap(nodes.size(), 0);
        std::vector<MergeTreeNode> out;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (alive[i]) {
                remap[i] = out.size();
                out.push_back(nodes[i]);
            }
        }
        for (auto& nd : out) nd.parent = remap[nd.parent];
        return MergeTree::make(std::move(out));
    }
};

}  // namespace

MergeTree compute_merge_tree(const ScalarGraph& sg) {
    require_generic_connected(sg);
    const std::size_t n = sg.vertices.size();
    const auto adj = sg.adjacency();
    auto value = [&](std::size_t i) { return sg.vertices[i].value; };

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (value(a) != value(b)) return value(a) < value(b);
        return sg.vertices[a].id < sg.vertices[b].id;
    });
    std::vector<std::size_t> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;

    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> child(n, none);    // child pointer on graph vertices
    std::vector<std::size_t> node_of(n, none);  // tree node created by a representative

    auto representative = [&](std::size_t v) {
        std::size_t r = v;
        while (child[r] != r) r = child[r];
        while (child[v] != r) {  // path compression
            auto next = child[v];
            child[v] = r;
            v = next;
        }
        return r;
    };

    Builder b;
    for (auto v : order) {
        std::vector<std::size_t> reps;
        for (auto u : adj[v]) {
            if (value(u) < value(v)) {
                auto r = representative(u);
                if (std::find(reps.begin(), reps.end(), r) == reps.end()) reps.push_back(r);
            }
        }

        if (reps.empty()) {
            node_of[v] = b.add(sg.vertices[v].id, value(v));
            child[v] = v;
        } else if (reps.size() == 1) {
            child[v] = reps.front();
        } else {
            const auto lowest = *std::min_element(reps.begin(), reps.end(), [&](auto a, auto c) { return rank[a] < rank[c]; });
            const auto merged = b.add(sg.vertices[v].id, value(v));
            for (auto x : reps) {
                const auto top = b.root_of(node_of[x]);
                if (b.nodes[top].value == value(v) && top != node_of[x]) {
                    // An equal-level merge from the same event: fold its children into this node.
                    for (std::size_t i = 0; i < b.nodes.size(); ++i)
                        if (b.alive[i] && i != top && b.nodes[i].parent == top) b.nodes[i].parent = merged;
                    b.alive[top] = 0;
                    b.nodes[top].parent = merged;
                } else {
                    b.nodes[top].parent = merged;
                }
            }
            child[v] = lowest;
            for (auto x : reps) child[x] = lowest;
        }
    }
    return b.finish();
}

std::set<std::set<VertexId>> identified_components(const ScalarGraph& sg, double level, bool closed) {
    const auto adj = sg.adjacency();
    const std::size_t n = sg.vertices.size();
    auto inside = [&](std::size_t i) { return closed ? sg.vertices[i].value <= level : sg.vertices[i].value < level; };

    std::set<std::set<VertexId>> gamma;
    std::vector<char> seen(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s] || !inside(s)) continue;
        std::vector<std::size_t> comp{s};
        seen[s] = 1;
        for (std::size_t head = 0; head < comp.size(); ++head) {
            for (auto w : adj[comp[head]]) {
                if (!seen[w] && inside(w)) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
            }
        }
        std::set<VertexId> minima;
        for (auto v : comp) {
            bool lowest = true;
            for (auto w : adj[v])
                if (inside(w) && sg.vertices[w].value < sg.vertices[v].value) lowest = false;
            if (lowest) minima.insert(sg.vertices[v].id);
        }
        gamma.insert(std::move(minima));
    }
    return gamma;
}

MergeTree merge_tree_oracle(const ScalarGraph& sg) {
    require_generic_connected(sg);
    std::vector<double> levels;
    for (const auto& v : sg.vertices) levels.push_back(v.value);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<MergeTreeNode> nodes;
    std::map<std::set<VertexId>, std::size_t> node_of;
    for (double a : levels) {
        const auto below = identified_components(sg, a, false);
        const auto at = identified_components(sg, a, true);
        for (const auto& L : at) {
            if (below.count(L)) continue;  // not part of the change in connectedness
            const auto idx = nodes.size();
            nodes.push_back({static_cast<NodeId>(idx), a, idx, std::nullopt});
            for (const auto& L2 : below) {
                if (L2.size() < L.size() && std::includes(L.begin(), L.end(), L2.begin(), L2.end()))
                    nodes[node_of.at(L2)].parent = idx;
            }
            node_of.emplace(L, idx);
        }
    }
    return MergeTree::make(std::move(nodes));
}

// ---------------------------------------------------------------------------
// Normalization

Centering parse_centering(const std::string& name) {
    if (name == "median") return Centering::median;
    if (name == "mean") return Centering::mean;
    throw InputError("unknown average '" + name + "' (expected median or mean)");
}

std::string to_string(Centering c) { return c == Centering::median ? "median" : "mean"; }

double center_of(const MergeTree& mt, Centering mode) {
    auto vals = mt.values();
    if (mode == Centering::mean) {
        std::sort(vals.begin(), vals.end());
        return std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    }
    std::sort(vals.begin(), vals.end());
    const auto k = vals.size();
    return k % 2 == 1 ? vals[k / 2] : (vals[k / 2 - 1] + vals[k / 2]) / 2.0;
}

MergeTree shift_median_zero(const MergeTree& mt, Centering mode) { return mt.shifted(-center_of(mt, mode)); }

std::size_t count_local_minima(const ScalarGraph& sg) {
    const auto adj = sg.adjacency();
    std::size_t count = 0;
    for (std::size_t v = 0; v < sg.vertices.size(); ++v) {
        bool lowest = true;
        for (auto w : adj[v])
            if (sg.vertices[w].value < sg.vertices[v].value) lowest = false;
        count += lowest;
    }
    return count;
}

// ---------------------------------------------------------------------------
// Comparison and serialization

namespace {

std::string canonical_at(const MergeTree& mt, std::size_t i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", mt.value(i));
    std::vector<std::string> kids;
    for (auto c : mt.children(i)) kids.push_back(canonical_at(mt, c));
    std::sort(kids.begin(), kids.end());
    std::string out = "(";
    out += buf;
    for (const auto& k : kids) out += k;
    out += ")";
    return out;
}

}  // namespace

std::string canonical_form(const MergeTree& mt) { return canonical_at(mt, mt.root()); }

bool value_isomorphic(const MergeTree& a, const MergeTree& b) {
    return a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

std::string merge_tree_to_json(const MergeTree& mt) {
    nlohmann::ordered_json doc;
    doc["nodes"] = nlohmann::ordered_json::array();
    doc["parent"] = nlohmann::ordered_json::object();
    for (const auto& nd : mt.nodes()) {
        doc["nodes"].push_back({{"id", nd.id}, {"value", nd.value}});
        doc["parent"][std::to_string(nd.id)] = mt.node(nd.parent).id;
    }
    return doc.dump() + "\n";
}

MergeTree parse_merge_tree_json(const std::string& text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        std::vector<MergeTreeNode> nodes;
        std::unordered_map<NodeId, std::size_t> pos;
        for (const auto& nd : doc.at("nodes")) {
            const auto id = nd.at("id").get<NodeId>();
            if (!pos.emplace(id, nodes.size()).second) throw InputError("duplicate merge tree node id " + std::to_string(id));
            nodes.push_back({id, nd.at("value").get<double>(), nodes.size(), std::nullopt});
        }
        const auto& parent = doc.at("parent");
        for (auto it = parent.begin(); it != parent.end(); ++it) {
            NodeId child = 0;
            try {
                child = std::stoll(it.key());
            } catch (const std::exception&) {
                throw InputError("parse failure: parent key '" + it.key() + "' is not an integer");
            }
            const auto c = pos.find(child);
            const auto p = pos.find(it.value().get<NodeId>());
            if (c == pos.end() || p == pos.end()) throw InputError("parent map references an unknown node");
            nodes[c->second].parent = p->second;
        }
        return MergeTree::make(std::move(nodes));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("parse failure: ") + e.what());
    }
}

MergeTree load_merge_tree(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_merge_tree_json(ss.str());
}

void write_merge_tree(const MergeTree& mt, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << merge_tree_to_json(mt);
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace abdkit
