#include "abdkit/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

namespace abdkit {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string newick_label(const std::string& s) {
    if (s.find_first_of(" ()[]':;,\t") == std::string::npos && !s.empty()) return s;
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// DistanceMatrix

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels) : labels_(std::move(labels)), d_(labels_.size() * labels_.size(), 0.0) {}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels, const std::vector<std::vector<double>>& rows)
    : DistanceMatrix(std::move(labels)) {
    if (rows.size() != size()) throw InputError("matrix row count does not match label count");
    for (std::size_t i = 0; i < size(); ++i) {
        if (rows[i].size() != size()) throw InputError("matrix is not square");
        for (std::size_t j = 0; j < size(); ++j) d_[i * size() + j] = rows[i][j];
    }
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
    d_[i * size() + j] = value;
    d_[j * size() + i] = value;
}

std::vector<std::vector<double>> DistanceMatrix::rows() const {
    std::vector<std::vector<double>> out(size(), std::vector<double>(size()));
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j) out[i][j] = at(i, j);
    return out;
}

void DistanceMatrix::validate() const {
    for (std::size_t i = 0; i < size(); ++i) {
        if (at(i, i) != 0.0) throw InputError("distance matrix diagonal must be zero");
        for (std::size_t j = 0; j < size(); ++j) {
            if (!(at(i, j) >= 0.0) || !std::isfinite(at(i, j))) throw InputError("distance matrix entries must be finite and non-negative");
            if (at(i, j) != at(j, i)) throw InputError("distance matrix must be symmetric");
        }
    }
}

DistanceMatrix distance_matrix(const std::vector<EmbeddedGraph>& graphs, const std::vector<std::string>& labels, const AbdOptions& opts,
                               unsigned jobs) {
    const std::size_t n = graphs.size();
    if (n < 2) throw InputError("distance matrix needs at least two graphs");
    if (labels.size() != n) throw InputError("one label per graph is required");
    jobs = std::max(1u, jobs);
    const auto frames = frame_angles(opts.frames);

    auto run = [jobs](std::size_t tasks, const auto& body) {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(jobs);
        auto worker = [&](unsigned w) {
            try {
                for (std::size_t t = next++; t < tasks; t = next++) body(t);
            } catch (...) {
                errors[w] = std::current_exception();
                next = tasks;
            }
        };
        if (jobs == 1) {
            worker(0);
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    };

    std::vector<std::vector<MergeTree>> trees(n);
    run(n, [&](std::size_t i) { trees[i] = frame_trees(graphs[i], frames, opts); });

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<double> values(pairs.size());
    run(pairs.size(), [&](std::size_t t) {
        values[t] = average_branching_distance_detailed(trees[pairs[t].first], trees[pairs[t].second], opts).value;
    });

    DistanceMatrix d(labels);
    for (std::size_t t = 0; t < pairs.size(); ++t) d.set(pairs[t].first, pairs[t].second, values[t]);
    return d;
}

// ---------------------------------------------------------------------------
// Clustering

Dendrogram single_linkage(const DistanceMatrix& d) {
    const std::size_t n = d.size();
    Dendrogram dend;
    dend.labels = d.labels();
    if (n == 0) return dend;

    // Active clusters keyed by id; link[a][b] is the single-link distance.
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});
    std::map<std::size_t, std::size_t> size;
    std::map<std::pair<std::size_t, std::size_t>, double> link;
    for (std::size_t i = 0; i < n; ++i) {
        size[i] = 1;
        for (std::size_t j = i + 1; j < n; ++j) link[{i, j}] = d.at(i, j);
    }
    auto get = [&](std::size_t a, std::size_t b) { return link.at({std::min(a, b), std::max(a, b)}); };

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t best_a = 0, best_b = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < active.size(); ++x) {
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const auto a = std::min(active[x], active[y]), b = std::max(active[x], active[y]);
                const double h = get(a, b);
                if (h < best || (h == best && std::pair(a, b) < std::pair(best_a, best_b))) {
                    best = h;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        const std::size_t merged = n + step;
        size[merged] = size[best_a] + size[best_b];
        dend.steps.push_back({best_a, best_b, best, size[merged]});
        std::erase_if(active, [&](std::size_t c) { return c == best_a || c == best_b; });
        for (auto c : active) link[{c, merged}] = std::min(get(c, best_a), get(c, best_b));
        active.push_back(merged);
    }
    return dend;
}

std::vector<std::size_t> cut_clusters(const Dendrogram& dend, std::size_t k) {
    const std::size_t n = dend.leaf_count();
    if (k < 1 || k > n) throw InputError("cluster count must be between 1 and " + std::to_string(n));
    DisjointSets sets(2 * n);
    // Item representative per cluster id, so merges can be replayed on items.
    std::vector<std::size_t> item_of(2 * n);
    std::iota(item_of.begin(), item_of.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
    for (std::size_t s = 0; s < n - k; ++s) {
        const auto& st = dend.steps[s];
        const auto ra = sets.find(item_of[st.a]), rb = sets.find(item_of[st.b]);
        sets.parent[std::max(ra, rb)] = std::min(ra, rb);
        item_of[n + s] = std::min(ra, rb);
    }
    std::vector<std::size_t> out(n);
    std::map<std::size_t, std::size_t> number;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = sets.find(i);
        auto it = number.find(r);
        if (it == number.end()) it = number.emplace(r, number.size()).first;
        out[i] = it->second;
    }
    return out;
}

double cluster_purity(const std::vector<std::size_t>& clusters, const std::vector<std::string>& truth) {
    if (clusters.size() != truth.size() || clusters.empty()) throw InputError("purity needs one truth label per item");
    std::map<std::size_t, std::map<std::string, std::size_t>> counts;
    for (std::size_t i = 0; i < clusters.size(); ++i) ++counts[clusters[i]][truth[i]];
    std::size_t agree = 0;
    for (const auto& [c, by_label] : counts) {
        std::size_t best = 0;
        for (const auto& [label, k] : by_label) best = std::max(best, k);
        agree += best;
    }
    return static_cast<double>(agree) / static_cast<double>(clusters.size());
}

// ---------------------------------------------------------------------------
// Classical MDS

Embedding classical_mds(const DistanceMatrix& d, std::size_t k) {
    const auto n = static_cast<Eigen::Index>(d.size());
    if (k < 1 || k > d.size()) throw InputError("embedding dimension must be between 1 and the number of items");

    Eigen::MatrixXd sq(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = d.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            sq(i, j) = v * v;
        }
    const Eigen::MatrixXd centering = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    Eigen::MatrixXd gram = -0.5 * centering * sq * centering;
    gram = 0.5 * (gram + gram.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
    const Eigen::MatrixXd& evecs = solver.eigenvectors();

    Embedding e;
    e.labels = d.labels();
    double scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(evals(i)));
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        e.eigenvalues.push_back(evals(i));
        if (evals(i) < -1e-9 * scale) ++e.negative_eigenvalues;
    }

    e.coords.assign(d.size(), std::vector<double>(k, 0.0));
    for (std::size_t axis = 0; axis < k; ++axis) {
        const Eigen::Index col = n - 1 - static_cast<Eigen::Index>(axis);
        double lambda = evals(col);
        if (lambda <= 0.0) {
            if (lambda < 0.0) ++e.clamped_axes;
            continue;
        }
        Eigen::VectorXd v = evecs.col(col) * std::sqrt(lambda);
        const double tiny = 1e-9 * v.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(v(i)) > tiny) {
                if (v(i) < 0) v = -v;
                break;
            }
        }
        for (Eigen::Index i = 0; i < n; ++i) e.coords[static_cast<std::size_t>(i)][axis] = v(i);
    }
    return e;
}

// ---------------------------------------------------------------------------
// Formats

std::string matrix_to_csv(const DistanceMatrix& d) {
    std::string out = "label";
    for (const auto& l : d.labels()) out += "," + csv_field(l);
    out += "\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        out += csv_field(d.labels()[i]);
        for (std::size_t j = 0; j < d.size(); ++j) out += "," + fmt(d.at(i, j));
        out += "\n";
    }
    return out;
}

DistanceMatrix parse_matrix_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) throw InputError("empty matrix file");
    std::vector<std::string> labels(rows[0].begin() + 1, rows[0].end());
    if (rows.size() != labels.size() + 1) throw InputError("matrix CSV must have one row per label");
    std::vector<std::vector<double>> values;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != labels.size() + 1) throw InputError("matrix CSV row " + std::to_string(i) + " has the wrong width");
        std::vector<double> row;
        for (std::size_t j = 1; j < rows[i].size(); ++j) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(rows[i][j], &used));
                if (used != rows[i][j].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw InputError("matrix CSV cell '" + rows[i][j] + "' is not a number");
            }
        }
        values.push_back(std::move(row));
    }
    DistanceMatrix d(std::move(labels), values);
    d.validate();
    return d;
}

DistanceMatrix load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_matrix_csv(ss.str());
}

std::string dendrogram_to_newick(const Dendrogram& dend) {
    const std::size_t n = dend.leaf_count();
    if (n == 0) return ";\n";
    std::vector<std::string> text(2 * n);
    std::vector<double> height(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) text[i] = newick_label(dend.labels[i]);
    for (std::size_t s = 0; s < dend.steps.size(); ++s) {
        const auto& st = dend.steps[s];
        const auto id = n + s;
        height[id] = st.height;
        text[id] = "(" + text[st.a] + ":" + fmt(st.height - height[st.a]) + "," + text[st.b] + ":" + fmt(st.height - height[st.b]) + ")";
    }
    return text[dend.steps.empty() ? 0 : n + dend.steps.size() - 1] + ";\n";
}

std::string dendrogram_to_svg(const Dendrogram& dend) {
    const std::size_t n = dend.leaf_count();
    const double width = 640, row = 22, margin = 20, label_w = 140;
    const double height_px = std::max(1.0, static_cast<double>(n)) * row + 2 * margin;
    double max_h = 0.0;
    for (const auto& st : dend.steps) max_h = std::max(max_h, st.height);
    if (max_h <= 0.0) max_h = 1.0;
    const double plot_w = width - 2 * margin - label_w;

    // Leaf order: depth-first from the last merge so branches do not cross.
    std::vector<std::size_t> order;
    std::vector<std::size_t> stack{n == 0 ? 0 : (dend.steps.empty() ? 0 : n + dend.steps.size() - 1)};
    while (n > 0 && !stack.empty()) {
        const auto id = stack.back();
        stack.pop_back();
        if (id < n) {
            order.push_back(id);
        } else {
            const auto& st = dend.steps[id - n];
            stack.push_back(st.b);
            stack.push_back(st.a);
        }
    }
    std::vector<double> y(2 * n + 1, 0.0), x(2 * n + 1, 0.0);
    auto xpos = [&](double h) { return margin + label_w + plot_w * h / max_h; };
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height_px << "\">\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"12\" stroke-width=\"1.5\">\n";
    for (std::size_t r = 0; r < order.size(); ++r) {
        const auto id = order[r];
        y[id] = margin + row * (static_cast<double>(r) + 0.5);
        x[id] = xpos(0.0);
        svg << "<text x=\"" << margin << "\" y=\"" << y[id] + 4 << "\">" << xml_escape(dend.labels[id]) << "</text>\n";
    }
    for (std::size_t s = 0; s < dend.steps.size(); ++s) {
        const auto& st = dend.steps[s];
        const auto id = n + s;
        x[id] = xpos(st.height);
        y[id] = (y[st.a] + y[st.b]) / 2;
        svg << "<path fill=\"none\" stroke=\"#334\" d=\"M" << x[st.a] << "," << y[st.a] << " H" << x[id] << " V" << y[st.b] << " H" << x[st.b]
            << "\"/>\n";
    }
    svg << "<text x=\"" << xpos(max_h) << "\" y=\"" << height_px - 4 << "\" text-anchor=\"end\">height " << fmt_short(max_h) << "</text>\n";
    svg << "</g>\n</svg>\n";
    return svg.str();
}

std::string embedding_to_csv(const Embedding& e) {
    const std::size_t k = e.coords.empty() ? 0 : e.coords.front().size();
    std::string out = "label";
    for (std::size_t a = 0; a < k; ++a) out += ",x" + std::to_string(a + 1);
    out += "\n";
    for (std::size_t i = 0; i < e.coords.size(); ++i) {
        out += csv_field(e.labels[i]);
        for (double v : e.coords[i]) out += "," + fmt(v);
        out += "\n";
    }
    return out;
}

std::string embedding_to_svg(const Embedding& e, const std::vector<std::size_t>& groups) {
    static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"};
    const double size = 560, margin = 40;
    double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    for (const auto& c : e.coords) {
        const double cx = c.empty() ? 0.0 : c[0], cy = c.size() > 1 ? c[1] : 0.0;
        lo_x = std::min(lo_x, cx);
        hi_x = std::max(hi_x, cx);
        lo_y = std::min(lo_y, cy);
        hi_y = std::max(hi_y, cy);
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    auto px = [&](double v) { return margin + (v - lo_x) / span * (size - 2 * margin); };
    auto py = [&](double v) { return size - margin - (v - lo_y) / span * (size - 2 * margin); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (std::size_t i = 0; i < e.coords.size(); ++i) {
        const double cx = e.coords[i].empty() ? 0.0 : e.coords[i][0];
        const double cy = e.coords[i].size() > 1 ? e.coords[i][1] : 0.0;
        const char* colour = palette[(groups.size() == e.coords.size() ? groups[i] : 0) % 8];
        svg << "<circle cx=\"" << px(cx) << "\" cy=\"" << py(cy) << "\" r=\"4\" fill=\"" << colour << "\"/>\n";
        svg << "<text x=\"" << px(cx) + 6 << "\" y=\"" << py(cy) + 3 << "\">" << xml_escape(e.labels[i]) << "</text>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

std::string clusters_to_csv(const std::vector<std::string>& labels, const std::vector<std::size_t>& clusters) {
    std::string out = "label,cluster\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out += csv_field(labels[i]) + "," + std::to_string(clusters[i]) + "\n";
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw Error("write failed for " + path.string());
}

void export_matrix(const DistanceMatrix& d, const std::filesystem::path& path) { write_text(path, matrix_to_csv(d)); }

void export_dendrogram(const Dendrogram& dend, const std::filesystem::path& path, ExportKind kind) {
    if (kind == ExportKind::csv) throw InputError("dendrograms export as newick or svg");
    write_text(path, kind == ExportKind::newick ? dendrogram_to_newick(dend) : dendrogram_to_svg(dend));
}

void export_embedding(const Embedding& e, const std::filesystem::path& path, ExportKind kind) {
    if (kind == ExportKind::newick) throw InputError("embeddings export as csv or svg");
    write_text(path, kind == ExportKind::csv ? embedding_to_csv(e) : embedding_to_svg(e));
}

}  // namespace abdkit
