#include "abdkit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "abdkit/analysis.hpp"

#ifndef ABDKIT_FIXTURE_DIR
#define ABDKIT_FIXTURE_DIR "data/fixtures"
#endif

namespace abdkit {

namespace {

std::string num(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

// Runs `body`, timing it and turning exceptions into failures.
CheckResult timed(const std::string& name, const std::function<void(CheckResult&)>& body) {
    CheckResult r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail += (r.detail.empty() ? "" : "\n") + std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

void line(CheckResult& r, const std::string& text) {
    if (!r.detail.empty()) r.detail += "\n";
    r.detail += text;
}

std::size_t count_or(const VerifyOptions& opts, std::size_t fallback) { return opts.trials.value_or(fallback); }

std::filesystem::path fixture(const VerifyOptions& opts, const std::string& name) {
    return (opts.fixtures.empty() ? default_fixture_dir() : opts.fixtures) / name;
}

// Smallest positive gap between consecutive candidate values of (x, x).
double smallest_candidate_gap(const MergeTree& x) {
    const auto c = distance_candidates(x, x);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < c.size(); ++i) gap = std::min(gap, c[i] - c[i - 1]);
    return std::isfinite(gap) ? gap : 1.0;
}

// Moves one node by `delta` in whichever direction keeps the tree valid.
// Returns nullopt if neither direction does.
std::optional<MergeTree> perturb_node(const MergeTree& x, std::size_t i, double delta) {
    auto nodes = x.nodes();
    const double lo = x.is_leaf(i) ? -std::numeric_limits<double>::infinity() : [&] {
        double m = -std::numeric_limits<double>::infinity();
        for (auto c : x.children(i)) m = std::max(m, x.value(c));
        return m;
    }();
    const double hi = i == x.root() ? std::numeric_limits<double>::infinity() : x.value(x.node(i).parent);
    for (double v : {x.value(i) + delta, x.value(i) - delta}) {
        if (v > lo && v < hi) {
            nodes[i].value = v;
            return MergeTree::make(nodes);
        }
    }
    return std::nullopt;
}

}  // namespace

std::filesystem::path default_fixture_dir() { return ABDKIT_FIXTURE_DIR; }

CheckResult check_branching_counterexample(const VerifyOptions& opts) {
    return timed("branching distance breaks the triangle inequality", [&](CheckResult& r) {
        const auto x = load_merge_tree(fixture(opts, "triangle_violation_x.json"));
        const auto y = load_merge_tree(fixture(opts, "triangle_violation_y.json"));
        const auto z = load_merge_tree(fixture(opts, "triangle_violation_z.json"));
        const double xy = branching_distance(x, y), yz = branching_distance(y, z), xz = branching_distance(x, z);
        const double bxy = brute_force_distance(x, y), byz = brute_force_distance(y, z), bxz = brute_force_distance(x, z);
        line(r, "d_B(X,Y) = " + num(xy) + ", d_B(Y,Z) = " + num(yz) + ", d_B(X,Z) = " + num(xz));
        line(r, "brute force: " + num(bxy) + ", " + num(byz) + ", " + num(bxz));
        r.passed = xy == 5.0 && yz == 3.0 && xz == 1.0 && bxy == xy && byz == yz && bxz == xz && xy > yz + xz;
        if (r.passed) line(r, "5 > 3 + 1 holds");
    });
}

CheckResult check_abd_counterexamples(const VerifyOptions& opts) {
    return timed("average branching distance: triangle violation and zero distance", [&](CheckResult& r) {
        const auto g = load_graph(fixture(opts, "abd_violation_g.json"));
        const auto h = load_graph(fixture(opts, "abd_violation_h.json"));
        const auto j = load_graph(fixture(opts, "abd_violation_j.json"));
        AbdOptions one;
        one.frames = 1;
        const double gh = average_branching_distance(g, h, one), gj = average_branching_distance(g, j, one),
                     hj = average_branching_distance(h, j, one);
        line(r, "frames {pi/2}: d_A(G,H) = " + num(gh) + ", d_A(G,J) = " + num(gj) + ", d_A(H,J) = " + num(hj));
        const bool violation = gh == 6.5 && gj == 2.5 && hj == 3.0 && gh > gj + hj;

        const auto tri = load_graph(fixture(opts, "convex_triangle.json"));
        const auto sq = load_graph(fixture(opts, "convex_square.json"));
        const double zero = average_branching_distance(tri, sq, AbdOptions{});
        const bool iso = are_isomorphic(tri, sq);
        line(r, "convex triangle vs square, 10 frames: d_A = " + num(zero) + ", isomorphic = " + (iso ? "yes" : "no"));
        r.passed = violation && zero == 0.0 && !iso;
    });
}

CheckResult check_convex_polygons(const VerifyOptions& opts, std::size_t polygons, std::size_t angles) {
    return timed("convex polygons have trivial merge trees and zero distance", [&](CheckResult& r) {
        Rng rng(opts.seed);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        std::uniform_int_distribution<std::size_t> sides(5, 30);
        std::vector<double> omegas(angles);
        for (auto& w : omegas) w = angle(rng);
        std::vector<std::vector<MergeTree>> trees;
        std::size_t nontrivial = 0;
        for (std::size_t p = 0; p < polygons; ++p) {
            const auto poly = random_convex_polygon(rng, sides(rng));
            std::vector<MergeTree> per;
            for (double w : omegas) {
                per.push_back(frame_tree(poly, w));
                if (!per.back().is_trivial()) ++nontrivial;
            }
            trees.push_back(std::move(per));
        }
        std::size_t nonzero = 0, pairs = 0;
        for (std::size_t a = 0; a < trees.size(); ++a)
            for (std::size_t b = a + 1; b < trees.size(); ++b, ++pairs)
                if (average_branching_distance_detailed(trees[a], trees[b]).value != 0.0) ++nonzero;
        line(r, std::to_string(polygons) + " polygons x " + std::to_string(angles) + " angles: " + std::to_string(nontrivial) +
                    " non-trivial trees; " + std::to_string(nonzero) + "/" + std::to_string(pairs) + " pairs with nonzero distance");
        r.passed = nontrivial == 0 && nonzero == 0;
    });
}

CheckResult check_merge_tree_oracle(const VerifyOptions& opts, std::size_t trials) {
    return timed("sweep merge tree matches the definition-based oracle", [&](CheckResult& r) {
        Rng rng(opts.seed + 1);
        trials = count_or(opts, trials);
        std::size_t mismatches = 0, minima = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto sg = random_scalar_graph(rng, 20);
            const auto mt = compute_merge_tree(sg);
            if (!value_isomorphic(mt, merge_tree_oracle(sg))) ++mismatches;
            if (mt.leaf_count() != count_local_minima(sg)) ++minima;
        }
        line(r, std::to_string(trials) + " random graphs: " + std::to_string(mismatches) + " oracle mismatches, " + std::to_string(minima) +
                    " leaf/minimum count mismatches");
        r.passed = mismatches == 0 && minima == 0;
    });
}

CheckResult check_distance_oracle(const VerifyOptions& opts, std::size_t trials) {
    return timed("exact branching distance equals brute force", [&](CheckResult& r) {
        Rng rng(opts.seed + 2);
        trials = count_or(opts, trials);
        std::size_t mismatches = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto x = random_merge_tree(rng, kBruteForceLeafLimit), y = random_merge_tree(rng, kBruteForceLeafLimit);
            const double d = branching_distance(x, y), bf = brute_force_distance(x, y);
            if (d != bf) {
                if (++mismatches <= 5) line(r, "mismatch: exact " + num(d) + " vs brute force " + num(bf));
            }
        }
        line(r, std::to_string(trials) + " tree pairs (<= 5 leaves): " + std::to_string(mismatches) + " mismatches");
        r.passed = mismatches == 0;
    });
}

CheckResult check_semi_metric(const VerifyOptions& opts, std::size_t trials) {
    return timed("branching distance is symmetric, zero on itself, positive on perturbations", [&](CheckResult& r) {
        Rng rng(opts.seed + 3);
        trials = count_or(opts, trials);
        std::size_t asym = 0, self = 0, zero = 0, negative = 0, perturbed = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto x = random_merge_tree(rng, 7), y = random_merge_tree(rng, 7);
            const double xy = branching_distance(x, y), yx = branching_distance(y, x);
            if (xy != yx) ++asym;
            if (xy < 0.0) ++negative;
            if (branching_distance(x, x) != 0.0) ++self;

            std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
            const double delta = 1.5 * smallest_candidate_gap(x);
            for (std::size_t attempt = 0; attempt < x.size(); ++attempt) {
                if (auto xp = perturb_node(x, pick(rng), delta)) {
                    ++perturbed;
                    if (branching_distance(x, *xp) <= 0.0) ++zero;
                    break;
                }
            }
        }
        line(r, std::to_string(trials) + " pairs: " + std::to_string(asym) + " asymmetric, " + std::to_string(negative) + " negative, " +
                    std::to_string(self) + " nonzero self-distances; " + std::to_string(zero) + "/" + std::to_string(perturbed) +
                    " perturbations at distance 0");
        r.passed = asym == 0 && self == 0 && zero == 0 && negative == 0 && perturbed > 0;
    });
}

CheckResult check_clustering(const VerifyOptions& opts) {
    return timed("single linkage recovers synthetic shape classes", [&](CheckResult& r) {
        const auto data = synthetic_dataset({ShapeClass::star, ShapeClass::comb, ShapeClass::zigzag}, 6, opts.seed);
        std::vector<EmbeddedGraph> graphs;
        std::vector<std::string> names, truth;
        for (const auto& d : data) {
            graphs.push_back(d.graph);
            names.push_back(d.name);
            truth.push_back(d.label);
        }
        const auto d = distance_matrix(graphs, names, AbdOptions{}, opts.jobs);
        const auto clusters = cut_clusters(single_linkage(d), 3);
        const double purity = cluster_purity(clusters, truth);
        line(r, "3 classes x 6 instances, 10 frames, seed " + std::to_string(opts.seed) + ": purity " + num(purity));
        r.passed = purity >= 0.9;
    });
}

CheckResult check_frame_stability(const VerifyOptions& opts, std::size_t pairs) {
    return timed("distance at 20 frames tracks 100 frames", [&](CheckResult& r) {
        Rng rng(opts.seed + 4);
        AbdOptions at20, at100;
        at20.frames = 20;
        at100.frames = 100;
        std::size_t stable = 0;
        for (std::size_t p = 0; p < pairs; ++p) {
            const auto a = synthetic_shape(ShapeClass::stroke, rng), b = synthetic_shape(ShapeClass::stroke, rng);
            const double d20 = average_branching_distance(a, b, at20), d100 = average_branching_distance(a, b, at100);
            const double rel = std::abs(d20 - d100) / std::max(d100, 1e-9);
            if (rel <= 0.15)
                ++stable;
            else
                line(r, "pair " + std::to_string(p) + ": " + num(d20) + " at 20 frames vs " + num(d100) + " at 100 (relative change " + num(rel) +
                            ")");
        }
        line(r, std::to_string(stable) + "/" + std::to_string(pairs) + " stroke pairs within 15%");
        r.passed = stable * 10 >= pairs * 8;
    });
}

CheckResult check_tolerance_mode(const VerifyOptions& opts, std::size_t trials) {
    return timed("tolerance mode stays within its tolerance of exact mode", [&](CheckResult& r) {
        Rng rng(opts.seed + 2);  // same pairs as the brute-force check
        trials = count_or(opts, trials);
        DistanceOptions tol;
        tol.mode = DistanceMode::tolerance;
        tol.tolerance = 1e-6;
        std::size_t off = 0;
        double worst = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto x = random_merge_tree(rng, kBruteForceLeafLimit), y = random_merge_tree(rng, kBruteForceLeafLimit);
            const double err = std::abs(branching_distance(x, y, tol) - branching_distance(x, y));
            worst = std::max(worst, err);
            if (err > tol.tolerance) ++off;
        }
        line(r, std::to_string(trials) + " pairs: worst deviation " + num(worst) + ", " + std::to_string(off) + " beyond 1e-6");
        r.passed = off == 0;
    });
}

CheckResult check_engine_agreement(const VerifyOptions& opts, std::size_t trials) {
    return timed("optimized and baseline engines agree", [&](CheckResult& r) {
        Rng rng(opts.seed + 5);
        trials = count_or(opts, trials);
        DistanceOptions base;
        base.engine = Engine::baseline;
        std::size_t mismatches = 0, nonmonotone = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto x = random_merge_tree(rng, 8), y = random_merge_tree(rng, 8);
            const double d = branching_distance(x, y);
            if (d != branching_distance(x, y, base)) ++mismatches;
            // The decision flips exactly once along the candidate list.
            bool seen_true = false;
            for (double c : distance_candidates(x, y)) {
                const bool s = is_eps_similar(x, y, c);
                if (seen_true && !s) ++nonmonotone;
                seen_true = seen_true || s;
            }
        }
        line(r, std::to_string(trials) + " pairs (<= 8 leaves): " + std::to_string(mismatches) + " engine mismatches, " +
                    std::to_string(nonmonotone) + " non-monotone decisions");
        r.passed = mismatches == 0 && nonmonotone == 0;
    });
}

CheckResult check_tree_properties(const VerifyOptions& opts, std::size_t trials) {
    return timed("shift behaviour of the branching distance", [&](CheckResult& r) {
        Rng rng(opts.seed + 6);
        trials = count_or(opts, trials);
        std::uniform_real_distribution<double> shift(-5.0, 5.0);
        std::size_t common = 0, single = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto x = random_merge_tree(rng, 6), y = random_merge_tree(rng, 6);
            const double d = branching_distance(x, y);
            const double c = std::round(shift(rng) * 4.0) / 4.0;  // dyadic, so shifting is exact
            if (branching_distance(x.shifted(c), y.shifted(c)) != d) ++common;
            if (std::abs(branching_distance(x.shifted(c), y) - d) > std::abs(c) + 1e-12) ++single;
        }
        line(r, std::to_string(trials) + " pairs: " + std::to_string(common) + " common-shift changes, " + std::to_string(single) +
                    " one-sided shifts moving the distance by more than the shift");
        r.passed = common == 0 && single == 0;
    });
}

CheckResult check_abd_properties(const VerifyOptions& opts, std::size_t trials) {
    return timed("average branching distance: symmetry, translation, frame rotation", [&](CheckResult& r) {
        Rng rng(opts.seed + 7);
        trials = count_or(opts, trials);
        std::uniform_real_distribution<double> offset(-3.0, 3.0);
        std::uniform_int_distribution<int> turn(1, 7);
        AbdOptions o;
        o.frames = 8;
        std::size_t asym = 0, self = 0, moved = 0, rotated_off = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto g = random_embedded_graph(rng, 12), h = random_embedded_graph(rng, 12);
            const double d = average_branching_distance(g, h, o);
            if (d != average_branching_distance(h, g, o)) ++asym;
            if (average_branching_distance(g, g, o) != 0.0) ++self;
            if (std::abs(average_branching_distance(translated(g, offset(rng), offset(rng)), h, o) - d) > 1e-9) ++moved;
            const double a = 2.0 * std::numbers::pi * turn(rng) / static_cast<double>(o.frames);
            if (std::abs(average_branching_distance(rotated(g, a), rotated(h, a), o) - d) > 1e-9) ++rotated_off;
        }
        line(r, std::to_string(trials) + " graph pairs: " + std::to_string(asym) + " asymmetric, " + std::to_string(self) +
                    " nonzero self-distances, " + std::to_string(moved) + " translation changes, " + std::to_string(rotated_off) +
                    " frame-rotation changes");
        r.passed = asym == 0 && self == 0 && moved == 0 && rotated_off == 0;
    });
}

bool VerifyReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::text() const {
    std::ostringstream out;
    std::size_t passed = 0;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "\n";
        std::istringstream detail(c.detail);
        for (std::string l; std::getline(detail, l);) out << "      " << l << "\n";
        if (c.passed) ++passed;
    }
    out << (ok() ? "PASS" : "FAIL") << ": " << passed << "/" << checks.size() << " checks passed\n";
    return out.str();
}

VerifyReport run_verify(const VerifyOptions& opts, const std::function<void(const CheckResult&)>& progress) {
    VerifyReport report;
    const std::vector<std::function<CheckResult()>> checks = {
        [&] { return check_branching_counterexample(opts); },
        [&] { return check_abd_counterexamples(opts); },
        [&] { return check_convex_polygons(opts); },
        [&] { return check_merge_tree_oracle(opts); },
        [&] { return check_distance_oracle(opts); },
        [&] { return check_semi_metric(opts); },
        [&] { return check_clustering(opts); },
        [&] { return check_frame_stability(opts); },
        [&] { return check_tolerance_mode(opts); },
        [&] { return check_engine_agreement(opts); },
        [&] { return check_tree_properties(opts); },
        [&] { return check_abd_properties(opts); },
    };
    for (const auto& run : checks) {
        report.checks.push_back(run());
        if (progress) progress(report.checks.back());
    }
    return report;
}

}  // namespace abdkit
