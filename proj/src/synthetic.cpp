#include "abdkit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "abdkit/error.hpp"

namespace abdkit {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Appends a straight run of `steps` new vertices from `from` to (x1, y1);
// returns the id of the last one.
VertexId add_segment(std::vector<Vertex>& vs, std::vector<std::pair<VertexId, VertexId>>& es, VertexId from, double x1, double y1,
                     int steps) {
    const auto& start = vs[static_cast<std::size_t>(from)];
    const double x0 = start.x, y0 = start.y;
    VertexId prev = from;
    for (int s = 1; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        const auto id = static_cast<VertexId>(vs.size());
        vs.push_back({id, x0 + t * (x1 - x0), y0 + t * (y1 - y0)});
        es.emplace_back(prev, id);
        prev = id;
    }
    return prev;
}

}  // namespace

MergeTree random_merge_tree(Rng& rng, std::size_t max_leaves) {
    const std::size_t leaves = uniform_index(rng, 1, std::max<std::size_t>(1, max_leaves));
    std::vector<MergeTreeNode> nodes;
    struct Comp {
        std::size_t node;
        double top;
    };
    std::vector<Comp> comps;
    for (std::size_t i = 0; i < leaves; ++i) {
        const double v = 0.5 * static_cast<double>(uniform_index(rng, 0, 16));
        nodes.push_back({static_cast<NodeId>(i), v, i, std::nullopt});
        comps.push_back({i, v});
    }
    while (comps.size() > 1) {
        std::shuffle(comps.begin(), comps.end(), rng);
        const std::size_t k = std::min(comps.size(), uniform_index(rng, 2, 10) <= 8 ? std::size_t{2} : std::size_t{3});
        double top = 0.0;
        for (std::size_t i = 0; i < k; ++i) top = std::max(top, comps[i].top);
        const double v = top + 0.5 * static_cast<double>(uniform_index(rng, 1, 6));
        const auto idx = nodes.size();
        nodes.push_back({static_cast<NodeId>(idx), v, idx, std::nullopt});
        for (std::size_t i = 0; i < k; ++i) nodes[comps[i].node].parent = idx;
        comps.erase(comps.begin(), comps.begin() + static_cast<std::ptrdiff_t>(k));
        comps.push_back({idx, v});
    }
    return MergeTree::make(std::move(nodes));
}

ScalarGraph random_scalar_graph(Rng& rng, std::size_t max_vertices) {
    const std::size_t n = uniform_index(rng, 1, std::max<std::size_t>(1, max_vertices));
    std::uniform_real_distribution<double> value(-10.0, 10.0);
    std::set<double> used;
    std::vector<ScalarVertex> vs;
    for (std::size_t i = 0; i < n; ++i) {
        double v = value(rng);
        while (!used.insert(v).second) v = value(rng);
        vs.push_back({static_cast<VertexId>(i), v});
    }
    std::vector<std::pair<VertexId, VertexId>> es;
    for (std::size_t i = 1; i < n; ++i) es.emplace_back(static_cast<VertexId>(uniform_index(rng, 0, i - 1)), static_cast<VertexId>(i));
    const std::size_t extra = n > 2 ? uniform_index(rng, 0, n) : 0;
    for (std::size_t e = 0; e < extra; ++e) {
        const auto a = uniform_index(rng, 0, n - 1), b = uniform_index(rng, 0, n - 1);
        if (a != b) es.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
    }
    return ScalarGraph::make(std::move(vs), std::move(es));
}

EmbeddedGraph random_embedded_graph(Rng& rng, std::size_t max_vertices) {
    const auto sg = random_scalar_graph(rng, max_vertices);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    std::vector<Vertex> vs;
    for (const auto& v : sg.vertices) vs.push_back({v.id, coord(rng), coord(rng)});
    std::vector<std::pair<VertexId, VertexId>> es;
    for (const auto& e : sg.edges) es.emplace_back(e.u, e.v);
    return EmbeddedGraph::make(std::move(vs), std::move(es));
}

EmbeddedGraph random_convex_polygon(Rng& rng, std::size_t n) {
    if (n < 3) throw InputError("a polygon needs at least 3 vertices");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double a = 0.5 + 2.0 * unit(rng), b = 0.5 + 2.0 * unit(rng);
    const double tilt = 2.0 * std::numbers::pi * unit(rng);
    const double cx = 4.0 * unit(rng) - 2.0, cy = 4.0 * unit(rng) - 2.0;
    std::vector<double> theta(n);
    for (auto& t : theta) t = 2.0 * std::numbers::pi * unit(rng);
    std::sort(theta.begin(), theta.end());
    theta.erase(std::unique(theta.begin(), theta.end()), theta.end());
    if (theta.size() < 3) return regular_polygon(n);
    std::vector<Vertex> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double ex = a * std::cos(theta[i]), ey = b * std::sin(theta[i]);
        vs.push_back({static_cast<VertexId>(i), cx + ex * std::cos(tilt) - ey * std::sin(tilt), cy + ex * std::sin(tilt) + ey * std::cos(tilt)});
        es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % theta.size()));
    }
    return EmbeddedGraph::make(std::move(vs), std::move(es));
}

EmbeddedGraph regular_polygon(std::size_t n, double r) {
    if (n < 3) throw InputError("a polygon needs at least 3 vertices");
    std::vector<Vertex> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        vs.push_back({static_cast<VertexId>(i), r * std::cos(t), r * std::sin(t)});
        es.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % n));
    }
    return EmbeddedGraph::make(std::move(vs), std::move(es));
}

std::string to_string(ShapeClass c) {
    switch (c) {
        case ShapeClass::star: return "star";
        case ShapeClass::comb: return "comb";
        case ShapeClass::zigzag: return "zigzag";
        case ShapeClass::blob: return "blob";
        case ShapeClass::stroke: return "stroke";
    }
    return "?";
}

ShapeClass parse_shape_class(const std::string& name) {
    for (auto c : {ShapeClass::star, ShapeClass::comb, ShapeClass::zigzag, ShapeClass::blob, ShapeClass::stroke})
        if (name == to_string(c)) return c;
    throw InputError("unknown shape class '" + name + "' (expected star, comb, zigzag, blob or stroke)");
}

EmbeddedGraph synthetic_shape(ShapeClass c, Rng& rng, double noise) {
    std::vector<Vertex> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    switch (c) {
        case ShapeClass::star: {
            vs.push_back({0, 0.0, 0.0});
            for (int arm = 0; arm < 5; ++arm) {
                const double t = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * arm / 5.0;
                add_segment(vs, es, 0, std::cos(t), std::sin(t), 4);
            }
            break;
        }
        case ShapeClass::comb: {
            vs.push_back({0, -1.0, 0.3});
            VertexId spine = 0;
            for (int tooth = 0; tooth < 5; ++tooth) {
                const double x = -1.0 + 0.5 * tooth;
                if (tooth > 0) spine = add_segment(vs, es, spine, x, 0.3, 2);
                add_segment(vs, es, spine, x, -0.5, 3);
            }
            break;
        }
        case ShapeClass::zigzag: {
            vs.push_back({0, -1.0, 0.5});
            VertexId prev = 0;
            for (int k = 1; k <= 6; ++k) prev = add_segment(vs, es, prev, -1.0 + k / 3.0, k % 2 == 1 ? -0.5 : 0.5, 3);
            break;
        }
        case ShapeClass::blob: {
            std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
            std::uniform_real_distribution<double> amp(0.08, 0.22);
            const double a3 = amp(rng), a5 = amp(rng) * 0.6, p3 = phase(rng), p5 = phase(rng);
            const int n = 60;
            for (int i = 0; i < n; ++i) {
                const double t = 2.0 * std::numbers::pi * i / n;
                const double r = 1.0 + a3 * std::cos(3 * t + p3) + a5 * std::cos(5 * t + p5);
                vs.push_back({i, r * std::cos(t), r * std::sin(t)});
                es.emplace_back(i, (i + 1) % n);
            }
            // Blobs are already smooth random curves; keep jitter off so they stay smooth.
            return EmbeddedGraph::make(std::move(vs), std::move(es));
        }
        case ShapeClass::stroke: {
            // Low-order Fourier curve over a half period, like a pen stroke.
            std::normal_distribution<double> coeff(0.0, 1.0);
            std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
            double ax[4], ay[4], px[4], py[4];
            for (int k = 0; k < 4; ++k) {
                ax[k] = coeff(rng) / (k + 1);
                ay[k] = coeff(rng) / (k + 1);
                px[k] = phase(rng);
                py[k] = phase(rng);
            }
            const int n = 40;
            for (int i = 0; i < n; ++i) {
                const double t = std::numbers::pi * i / (n - 1);
                double x = 0.0, y = 0.0;
                for (int k = 0; k < 4; ++k) {
                    x += ax[k] * std::cos((k + 1) * t + px[k]);
                    y += ay[k] * std::cos((k + 1) * t + py[k]);
                }
                vs.push_back({i, x, y});
                if (i > 0) es.emplace_back(i - 1, i);
            }
            return EmbeddedGraph::make(std::move(vs), std::move(es));
        }
    }
    std::normal_distribution<double> jitter(0.0, noise);
    for (auto& v : vs) {
        v.x += jitter(rng);
        v.y += jitter(rng);
    }
    return EmbeddedGraph::make(std::move(vs), std::move(es));
}

std::vector<LabelledGraph> synthetic_dataset(const std::vector<ShapeClass>& classes, std::size_t per_class, std::uint64_t seed,
                                             double noise) {
    Rng rng(seed);
    std::vector<LabelledGraph> out;
    for (auto c : classes)
        for (std::size_t k = 0; k < per_class; ++k)
            out.push_back({to_string(c) + "_" + std::to_string(k), to_string(c), synthetic_shape(c, rng, noise)});
    return out;
}

}  // namespace abdkit
