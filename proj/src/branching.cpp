#include "abdkit/branching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>

namespace abdkit {

double matching_cost(double min_u, double top_u, double min_v, double top_v) {
    return std::max(std::abs(min_u - min_v), std::abs(top_u - top_v));
}

double removal_cost(double min_value, double top_value) { return std::abs(min_value - top_value) / 2.0; }

double matching_cost(const Branch& u, const Branch& v) {
    return matching_cost(u.min_value, u.top_value, v.min_value, v.top_value);
}

double removal_cost(const Branch& u) { return removal_cost(u.min_value, u.top_value); }

std::string to_string(Engine e) { return e == Engine::optimized ? "optimized" : "baseline"; }

Engine parse_engine(const std::string& name) {
    if (name == "optimized") return Engine::optimized;
    if (name == "baseline") return Engine::baseline;
    throw InputError("unknown engine '" + name + "' (expected optimized or baseline)");
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// ---------------------------------------------------------------------------
// Decompositions

std::vector<std::size_t> internal_nodes(const MergeTree& mt) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mt.size(); ++i)
        if (!mt.is_leaf(i)) out.push_back(i);
    return out;
}

std::vector<std::size_t> children_by_id(const MergeTree& mt, std::size_t n) {
    auto kids = mt.children(n);
    std::sort(kids.begin(), kids.end(), [&](auto a, auto b) { return mt.node(a).id < mt.node(b).id; });
    return kids;
}

void append_chain(const MergeTree& mt, const std::vector<std::size_t>& through, std::size_t start, std::vector<std::size_t>& path) {
    path.push_back(start);
    while (!mt.is_leaf(start)) {
        start = through[start];
        path.push_back(start);
    }
}

BranchDecomposition build_decomposition(const MergeTree& mt, const std::vector<std::size_t>& through) {
    BranchDecomposition bd;
    const auto root = mt.root();
    auto add = [&](std::vector<std::size_t> path) {
        const auto top = path.front(), bottom = path.back();
        bd.branches.push_back(Branch{bottom, top, mt.value(bottom), mt.value(top)});
        bd.paths.push_back(std::move(path));
    };
    if (mt.is_trivial()) {
        add({root});
        return bd;
    }
    {
        std::vector<std::size_t> path{root};
        append_chain(mt, through, through[root], path);
        add(std::move(path));
    }
    // Remaining branches in preorder of their tops.
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
        const auto n = stack.back();
        stack.pop_back();
        const auto kids = children_by_id(mt, n);
        for (auto c : kids) {
            if (c == through[n]) continue;
            std::vector<std::size_t> path{n};
            append_chain(mt, through, c, path);
            add(std::move(path));
        }
        for (auto it = kids.rbegin(); it != kids.rend(); ++it)
            if (!mt.is_leaf(*it)) stack.push_back(*it);
    }
    return bd;
}

// ---------------------------------------------------------------------------
// Child-matching feasibility shared by both decision engines.
//
// Children of two matched vertices must be paired up so that every unpaired
// child is removable; paired children must be compatible. This is a perfect
// matching on the graph augmented with one "removed" slot per child.
bool child_matching_exists(std::size_t nx, std::size_t ny, const std::vector<char>& rem_x, const std::vector<char>& rem_y,
                           const std::function<bool(std::size_t, std::size_t)>& compatible) {
    std::size_t required_x = 0, required_y = 0;
    for (auto r : rem_x) required_x += !r;
    for (auto r : rem_y) required_y += !r;
    if (required_x > ny || required_y > nx) return false;
    if (nx == 0 || ny == 0) return required_x == 0 && required_y == 0;

    // Left: X children [0, nx) then Y dummies [nx, nx+ny).
    // Right: Y children [0, ny) then X dummies [ny, ny+nx).
    const std::size_t n = nx + ny;
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j)
            if (compatible(i, j)) adj[i].push_back(j);
        if (rem_x[i]) adj[i].push_back(ny + i);
    }
    for (std::size_t j = 0; j < ny; ++j) {
        if (rem_y[j]) adj[nx + j].push_back(j);
        for (std::size_t i = 0; i < nx; ++i) adj[nx + j].push_back(ny + i);
    }

    std::vector<std::size_t> match_right(n, kNone);
    std::vector<char> visited;
    std::function<bool(std::size_t)> augment = [&](std::size_t l) -> bool {
        for (auto r : adj[l]) {
            if (visited[r]) continue;
            visited[r] = 1;
            if (match_right[r] == kNone || augment(match_right[r])) {
                match_right[r] = l;
                return true;
            }
        }
        return false;
    };
    for (std::size_t l = 0; l < n; ++l) {
        visited.assign(n, 0);
        if (!augment(l)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Optimized engine: dynamic program over (slot, leaf) states.
//
// A slot is a tree node x. The branch states of slot x are the leaves l below
// x: the branch runs from top(x) (x itself for the root, parent(x) otherwise)
// down through x to l. Its children in the representation are the branches
// started at the side children of every node on the path x .. parent(l); each
// side child is again a slot with a free choice of leaf.
struct SlotIndex {
    const MergeTree* mt = nullptr;
    std::vector<std::vector<std::size_t>> leaves_under;
    std::vector<std::vector<std::vector<std::size_t>>> sides;  // [slot][leaf k] -> side child slots
    std::vector<double> top_value;
    std::vector<double> removal;  // cheapest achievable max removal cost of the subtree at this slot

    explicit SlotIndex(const MergeTree& tree) : mt(&tree) {
        const auto n = tree.size();
        leaves_under.assign(n, {});
        sides.assign(n, {});
        top_value.assign(n, 0.0);
        removal.assign(n, 0.0);

        // Post-order so children are finished before parents.
        std::vector<std::size_t> order;
        std::vector<std::size_t> stack{tree.root()};
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (auto c : tree.children(v)) stack.push_back(c);
        }
        std::reverse(order.begin(), order.end());

        for (auto x : order) {
            top_value[x] = x == tree.root() ? tree.value(x) : tree.value(tree.node(x).parent);
            if (tree.is_leaf(x)) {
                leaves_under[x] = {x};
            } else {
                for (auto c : tree.children(x))
                    leaves_under[x].insert(leaves_under[x].end(), leaves_under[c].begin(), leaves_under[c].end());
            }
            for (auto leaf : leaves_under[x]) {
                std::vector<std::size_t> side;
                // Walk up from the leaf to x; each step's other children are side slots.
                std::size_t below = leaf;
                while (below != x) {
                    const auto up = tree.node(below).parent;
                    for (auto c : tree.children(up))
                        if (c != below) side.push_back(c);
                    below = up;
                }
                sides[x].push_back(std::move(side));
            }
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < leaves_under[x].size(); ++k) {
                double worst = removal_cost(tree.value(leaves_under[x][k]), top_value[x]);
                for (auto c : sides[x][k]) worst = std::max(worst, removal[c]);
                best = std::min(best, worst);
            }
            removal[x] = best;
        }
    }
};

class OptimizedDecision {
public:
    OptimizedDecision(const SlotIndex& x, const SlotIndex& y, double eps)
        : x_(x), y_(y), eps_(eps), memo_(x.mt->size() * y.mt->size(), -1) {}

    bool run() { return similar(x_.mt->root(), y_.mt->root()); }

private:
    bool similar(std::size_t sx, std::size_t sy) {
        auto& slot = memo_[sx * y_.mt->size() + sy];
        if (slot >= 0) return slot != 0;
        slot = 0;
        const auto& lx = x_.leaves_under[sx];
        const auto& ly = y_.leaves_under[sy];
        for (std::size_t i = 0; i < lx.size() && !slot; ++i) {
            for (std::size_t j = 0; j < ly.size(); ++j) {
                const double mc = matching_cost(x_.mt->value(lx[i]), x_.top_value[sx], y_.mt->value(ly[j]), y_.top_value[sy]);
                if (mc > eps_) continue;
                if (sides_match(x_.sides[sx][i], y_.sides[sy][j])) {
                    slot = 1;
                    break;
                }
            }
        }
        return slot != 0;
    }

    bool sides_match(const std::vector<std::size_t>& cx, const std::vector<std::size_t>& cy) {
        std::vector<char> rx(cx.size()), ry(cy.size());
        for (std::size_t i = 0; i < cx.size(); ++i) rx[i] = x_.removal[cx[i]] <= eps_;
        for (std::size_t j = 0; j < cy.size(); ++j) ry[j] = y_.removal[cy[j]] <= eps_;
        return child_matching_exists(cx.size(), cy.size(), rx, ry, [&](std::size_t i, std::size_t j) { return similar(cx[i], cy[j]); });
    }

    const SlotIndex& x_;
    const SlotIndex& y_;
    double eps_;
    std::vector<std::int8_t> memo_;
};

// ---------------------------------------------------------------------------
// Exhaustive enumeration of matchings for the brute-force oracle.

using Pairing = std::vector<std::pair<std::size_t, std::size_t>>;

// All valid matchings of the subtrees below u and v that pair u with v.
std::vector<Pairing> matchings_from(const RootedTreeRep& rx, const RootedTreeRep& ry, std::size_t u, std::size_t v) {
    const auto& ku = rx.children[u];
    const auto& kv = ry.children[v];

    // Every partial injection from ku into kv.
    std::vector<Pairing> injections;
    Pairing current;
    std::vector<char> used(kv.size(), 0);
    std::function<void(std::size_t)> choose = [&](std::size_t i) {
        if (i == ku.size()) {
            injections.push_back(current);
            return;
        }
        choose(i + 1);  // ku[i] removed
        for (std::size_t j = 0; j < kv.size(); ++j) {
            if (used[j]) continue;
            used[j] = 1;
            current.emplace_back(ku[i], kv[j]);
            choose(i + 1);
            current.pop_back();
            used[j] = 0;
        }
    };
    choose(0);

    std::vector<Pairing> out;
    for (const auto& inj : injections) {
        std::vector<Pairing> partial{Pairing{{u, v}}};
        for (auto [c, d] : inj) {
            const auto sub = matchings_from(rx, ry, c, d);
            std::vector<Pairing> next;
            for (const auto& p : partial) {
                for (const auto& s : sub) {
                    Pairing merged = p;
                    merged.insert(merged.end(), s.begin(), s.end());
                    next.push_back(std::move(merged));
                }
            }
            partial = std::move(next);
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t count_branch_decompositions(const MergeTree& mt) {
    std::size_t count = 1;
    for (auto n : internal_nodes(mt)) count *= mt.children(n).size();
    return count;
}

std::vector<BranchDecomposition> enumerate_branch_decompositions(const MergeTree& mt, std::size_t max_leaves) {
    if (mt.leaf_count() > max_leaves)
        throw SizeGuardError("decomposition enumeration refuses trees with more than " + std::to_string(max_leaves) +
                             " leaves (got " + std::to_string(mt.leaf_count()) + ")");
    const auto inner = internal_nodes(mt);
    std::vector<std::vector<std::size_t>> options;
    for (auto n : inner) options.push_back(children_by_id(mt, n));

    std::vector<BranchDecomposition> out;
    std::vector<std::size_t> pick(inner.size(), 0);
    std::vector<std::size_t> through(mt.size(), kNone);
    while (true) {
        for (std::size_t k = 0; k < inner.size(); ++k) through[inner[k]] = options[k][pick[k]];
        out.push_back(build_decomposition(mt, through));
        // Odometer with the last internal node varying fastest.
        std::size_t k = inner.size();
        while (k > 0) {
            --k;
            if (++pick[k] < options[k].size()) break;
            pick[k] = 0;
            if (k == 0) return out;
        }
        if (inner.empty()) return out;
    }
}

RootedTreeRep rooted_tree_representation(const MergeTree& mt, const BranchDecomposition& bd) {
    RootedTreeRep rep;
    rep.vertices = bd.branches;
    const auto nb = bd.branches.size();
    std::vector<std::size_t> owner(mt.size(), kNone);
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t k = 1; k < bd.paths[b].size(); ++k) owner[bd.paths[b][k]] = b;
    owner[mt.root()] = 0;

    rep.parent.assign(nb, 0);
    rep.children.assign(nb, {});
    for (std::size_t b = 1; b < nb; ++b) {
        rep.parent[b] = owner[bd.branches[b].top];
        rep.children[rep.parent[b]].push_back(b);
    }
    for (std::size_t b = 0; b < nb; ++b)
        if (bd.branches[b].top == mt.root()) rep.root_branches.push_back(b);
    return rep;
}

bool representations_eps_similar(const RootedTreeRep& rx, const RootedTreeRep& ry, double eps) {
    auto removable = [eps](const RootedTreeRep& r) {
        // Children always have larger indices than their parents, so a reverse sweep is bottom-up.
        std::vector<double> worst(r.size(), 0.0);
        for (std::size_t b = r.size(); b-- > 0;) {
            worst[b] = std::max(worst[b], removal_cost(r.vertices[b]));
            if (b != 0) worst[r.parent[b]] = std::max(worst[r.parent[b]], worst[b]);
        }
        std::vector<char> ok(r.size());
        for (std::size_t b = 0; b < r.size(); ++b) ok[b] = worst[b] <= eps;
        return ok;
    };
    const auto rem_x = removable(rx);
    const auto rem_y = removable(ry);

    std::vector<std::int8_t> memo(rx.size() * ry.size(), -1);
    std::function<bool(std::size_t, std::size_t)> feasible = [&](std::size_t u, std::size_t v) -> bool {
        auto& m = memo[u * ry.size() + v];
        if (m >= 0) return m != 0;
        bool ok = matching_cost(rx.vertices[u], ry.vertices[v]) <= eps;
        if (ok) {
            const auto& ku = rx.children[u];
            const auto& kv = ry.children[v];
            std::vector<char> ru(ku.size()), rv(kv.size());
            for (std::size_t i = 0; i < ku.size(); ++i) ru[i] = rem_x[ku[i]];
            for (std::size_t j = 0; j < kv.size(); ++j) rv[j] = rem_y[kv[j]];
            ok = child_matching_exists(ku.size(), kv.size(), ru, rv, [&](std::size_t i, std::size_t j) { return feasible(ku[i], kv[j]); });
        }
        m = ok ? 1 : 0;
        return ok;
    };
    return feasible(0, 0);
}

bool is_eps_similar(const MergeTree& x, const MergeTree& y, double eps, Engine engine) {
    if (engine == Engine::optimized) {
        const SlotIndex ix(x), iy(y);
        return OptimizedDecision(ix, iy, eps).run();
    }
    std::vector<RootedTreeRep> reps_x, reps_y;
    for (const auto& bd : enumerate_branch_decompositions(x)) reps_x.push_back(rooted_tree_representation(x, bd));
    for (const auto& bd : enumerate_branch_decompositions(y)) reps_y.push_back(rooted_tree_representation(y, bd));
    for (const auto& rx : reps_x)
        for (const auto& ry : reps_y)
            if (representations_eps_similar(rx, ry, eps)) return true;
    return false;
}

std::vector<double> distance_candidates(const MergeTree& x, const MergeTree& y) {
    std::vector<double> values = x.values();
    const auto vy = y.values();
    values.insert(values.end(), vy.begin(), vy.end());

    std::vector<double> out{0.0};
    for (double a : values)
        for (double b : values) out.push_back(std::abs(a - b));
    for (const MergeTree* t : {&x, &y}) {
        for (auto leaf : t->leaves()) {
            auto s = leaf;
            while (s != t->root()) {
                s = t->node(s).parent;
                out.push_back(removal_cost(t->value(leaf), t->value(s)));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double branching_distance(const MergeTree& x, const MergeTree& y, const DistanceOptions& opts) {
    if (opts.engine == Engine::baseline && (x.leaf_count() > kBaselineLeafLimit || y.leaf_count() > kBaselineLeafLimit))
        throw SizeGuardError("baseline engine refuses trees with more than " + std::to_string(kBaselineLeafLimit) + " leaves");

    const auto candidates = distance_candidates(x, y);
    std::function<bool(double)> feasible;
    std::unique_ptr<SlotIndex> ix, iy;
    if (opts.engine == Engine::optimized) {
        ix = std::make_unique<SlotIndex>(x);
        iy = std::make_unique<SlotIndex>(y);
        feasible = [&](double eps) { return OptimizedDecision(*ix, *iy, eps).run(); };
    } else {
        feasible = [&](double eps) { return is_eps_similar(x, y, eps, Engine::baseline); };
    }

    if (opts.mode == DistanceMode::exact) {
        std::size_t lo = 0, hi = candidates.size() - 1;
        if (!feasible(candidates[hi])) throw std::logic_error("largest distance candidate is infeasible");
        while (lo < hi) {
            const auto mid = lo + (hi - lo) / 2;
            if (feasible(candidates[mid]))
                hi = mid;
            else
                lo = mid + 1;
        }
        return candidates[lo];
    }

    if (!(opts.tolerance > 0)) throw InputError("tolerance must be positive");
    if (feasible(0.0)) return 0.0;
    double lo = 0.0, hi = candidates.back();
    while (hi - lo > opts.tolerance) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double brute_force_representation_distance(const RootedTreeRep& rx, const RootedTreeRep& ry) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pairing : matchings_from(rx, ry, 0, 0)) {
        std::vector<char> in_x(rx.size(), 0), in_y(ry.size(), 0);
        double cost = 0.0;
        for (auto [u, v] : pairing) {
            in_x[u] = 1;
            in_y[v] = 1;
            cost = std::max(cost, matching_cost(rx.vertices[u], ry.vertices[v]));
        }
        for (std::size_t u = 0; u < rx.size(); ++u)
            if (!in_x[u]) cost = std::max(cost, removal_cost(rx.vertices[u]));
        for (std::size_t v = 0; v < ry.size(); ++v)
            if (!in_y[v]) cost = std::max(cost, removal_cost(ry.vertices[v]));
        best = std::min(best, cost);
    }
    return best;
}

double brute_force_distance(const MergeTree& x, const MergeTree& y) {
    if (x.leaf_count() > kBruteForceLeafLimit || y.leaf_count() > kBruteForceLeafLimit)
        throw SizeGuardError("brute force refuses trees with more than " + std::to_string(kBruteForceLeafLimit) + " leaves");
    double best = std::numeric_limits<double>::infinity();
    const auto dx = enumerate_branch_decompositions(x, kBruteForceLeafLimit);
    const auto dy = enumerate_branch_decompositions(y, kBruteForceLeafLimit);
    for (const auto& bx : dx) {
        const auto rx = rooted_tree_representation(x, bx);
        for (const auto& by : dy) best = std::min(best, brute_force_representation_distance(rx, rooted_tree_representation(y, by)));
    }
    return best;
}

}  // namespace abdkit
