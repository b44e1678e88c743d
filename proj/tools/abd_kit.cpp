// abd-kit: command-line front end.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abdkit/analysis.hpp"
#include "abdkit/synthetic.hpp"
#include "abdkit/verify.hpp"

namespace fs = std::filesystem;
using namespace abdkit;

namespace {

struct Globals {
    std::size_t frames = 10;
    std::string avg = "median";
    std::string mode;
    std::optional<double> tol;
    unsigned jobs = 1;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    std::string format = "json";
    std::string engine = "optimized";
};

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

DistanceOptions distance_options(const Globals& g) {
    DistanceOptions d;
    d.engine = parse_engine(g.engine);
    const std::string mode = g.mode.empty() ? (g.tol ? "tolerance" : "exact") : g.mode;
    if (mode == "exact") {
        d.mode = DistanceMode::exact;
    } else if (mode == "tolerance") {
        d.mode = DistanceMode::tolerance;
    } else {
        throw InputError("unknown --mode '" + mode + "' (expected exact or tolerance)");
    }
    if (g.tol) {
        if (!(*g.tol > 0.0)) throw InputError("--tol must be positive");
        d.tolerance = *g.tol;
    }
    return d;
}

AbdOptions abd_options(const Globals& g) {
    if (g.frames < 1) throw InputError("--frames must be at least 1");
    AbdOptions o;
    o.frames = g.frames;
    o.average = parse_centering(g.avg);
    o.distance = distance_options(g);
    return o;
}

// Writes to --out when given, otherwise to stdout.
void emit(const Globals& g, const std::string& text) {
    if (g.out.empty())
        std::cout << text << std::flush;
    else
        write_text(g.out, text);
}

EmbeddedGraph read_graph(const Globals& g, const std::string& path) { return load_graph(path, parse_graph_format(g.format)); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Merge-tree branching distances between planar embedded graphs"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--frames", g.frames, "Number of rotation frames")->check(CLI::PositiveNumber);
    app.add_option("--avg", g.avg, "Aggregate over frames: median or mean")->check(CLI::IsMember({"median", "mean"}));
    app.add_option("--mode", g.mode, "Distance mode: exact or tolerance")->check(CLI::IsMember({"exact", "tolerance"}));
    app.add_option("--tol", g.tol, "Bisection width for tolerance mode (implies --mode tolerance)");
    app.add_option("--jobs", g.jobs, "Worker threads for matrix building")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for synthetic data and randomized checks");
    app.add_option("--out", g.out, "Output path (default: stdout)");
    app.add_option("--format", g.format, "Graph file format: json or edgelist")->check(CLI::IsMember({"json", "edgelist"}));
    app.add_option("--engine", g.engine, "Decision engine: optimized or baseline")->check(CLI::IsMember({"optimized", "baseline"}));

    // tree
    auto* tree = app.add_subcommand("tree", "Merge tree of a graph in one direction, as JSON");
    std::string tree_graph;
    double angle = std::numbers::pi / 2.0;
    std::string center;
    tree->add_option("graph", tree_graph, "Graph file")->required()->check(CLI::ExistingFile);
    tree->add_option("--angle", angle, "Direction in radians (default pi/2)");
    tree->add_option("--normalize", center, "Shift values so their median or mean is 0")->check(CLI::IsMember({"median", "mean"}));

    // dist
    auto* dist = app.add_subcommand("dist", "Branching distance between two merge trees");
    std::string tree_a, tree_b;
    dist->add_option("treeA", tree_a, "Merge-tree JSON")->required()->check(CLI::ExistingFile);
    dist->add_option("treeB", tree_b, "Merge-tree JSON")->required()->check(CLI::ExistingFile);

    // abd
    auto* abd = app.add_subcommand("abd", "Average branching distance between two graphs");
    std::string graph_a, graph_b;
    bool per_frame = false;
    abd->add_option("G", graph_a, "Graph file")->required()->check(CLI::ExistingFile);
    abd->add_option("H", graph_b, "Graph file")->required()->check(CLI::ExistingFile);
    abd->add_flag("--per-frame", per_frame, "Also print each frame's distance as CSV");

    // matrix
    auto* matrix = app.add_subcommand("matrix", "Pairwise distance matrix as CSV");
    std::vector<std::string> matrix_graphs;
    matrix->add_option("graphs", matrix_graphs, "Graph files (labels are the file stems)")->required()->check(CLI::ExistingFile);

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Single-linkage dendrogram from a matrix CSV");
    std::string cluster_matrix;
    std::size_t k = 0;
    std::string cluster_kind = "newick";
    cluster->add_option("matrix", cluster_matrix, "Distance matrix CSV")->required()->check(CLI::ExistingFile);
    cluster->add_option("--export", cluster_kind, "newick or svg")->check(CLI::IsMember({"newick", "svg"}));
    cluster->add_option("-k,--clusters", k, "Print the assignment into k clusters as CSV instead");

    // mds
    auto* mds = app.add_subcommand("mds", "Classical multidimensional scaling of a matrix CSV");
    std::string mds_matrix;
    std::size_t dims = 2;
    std::string mds_kind = "csv";
    mds->add_option("matrix", mds_matrix, "Distance matrix CSV")->required()->check(CLI::ExistingFile);
    mds->add_option("--dims", dims, "Embedding dimension")->check(CLI::PositiveNumber);
    mds->add_option("--export", mds_kind, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));

    // verify
    auto* verify = app.add_subcommand("verify", "Replay the counterexamples and randomized property suites");
    std::optional<std::size_t> trials;
    std::string fixtures;
    verify->add_option("--trials", trials, "Trial count for every randomized suite")->check(CLI::PositiveNumber);
    verify->add_option("--fixtures", fixtures, "Fixture directory")->check(CLI::ExistingDirectory);

    // gen
    auto* gen = app.add_subcommand("gen", "Write synthetic graphs as files");
    std::vector<std::string> classes;
    std::size_t count = 6;
    double noise = 0.03;
    gen->add_option("classes", classes, "star, comb, zigzag, blob, stroke or convex")->required();
    gen->add_option("--count", count, "Instances per class")->check(CLI::PositiveNumber);
    gen->add_option("--noise", noise, "Jitter standard deviation")->check(CLI::NonNegativeNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tree) {
            const auto graph = read_graph(g, tree_graph);
            auto connected = graph;
            if (!is_connected(graph)) {
                connected = largest_component(graph);
                std::cerr << "warning: input is disconnected; using its largest component (" << connected.vertex_count() << " of "
                          << graph.vertex_count() << " vertices)\n";
            }
            auto mt = compute_merge_tree(collapse_equal_adjacent(direction_filter(connected, angle)));
            if (!center.empty()) mt = shift_median_zero(mt, parse_centering(center));
            emit(g, merge_tree_to_json(mt) + "\n");
        } else if (*dist) {
            const auto opts = distance_options(g);
            const auto x = load_merge_tree(tree_a), y = load_merge_tree(tree_b);
            const double d = branching_distance(x, y, opts);
            std::cerr << "engine: " << to_string(opts.engine) << ", mode: " << (opts.mode == DistanceMode::exact ? "exact" : "tolerance")
                      << "\n";
            emit(g, shortest(d) + "\n");
        } else if (*abd) {
            const auto opts = abd_options(g);
            const auto r = average_branching_distance_detailed(read_graph(g, graph_a), read_graph(g, graph_b), opts);
            std::string text = shortest(r.value) + "\n";
            if (per_frame) {
                const auto frames = frame_angles(opts.frames);
                text += "angle,distance\n";
                for (std::size_t i = 0; i < frames.size(); ++i) text += shortest(frames.angles[i]) + "," + shortest(r.per_frame[i]) + "\n";
            }
            emit(g, text);
        } else if (*matrix) {
            std::vector<EmbeddedGraph> graphs;
            std::vector<std::string> labels;
            for (const auto& p : matrix_graphs) {
                graphs.push_back(read_graph(g, p));
                labels.push_back(fs::path(p).stem().string());
            }
            emit(g, matrix_to_csv(distance_matrix(graphs, labels, abd_options(g), g.jobs)));
        } else if (*cluster) {
            const auto dend = single_linkage(load_matrix_csv(cluster_matrix));
            if (k > 0)
                emit(g, clusters_to_csv(dend.labels, cut_clusters(dend, k)));
            else
                emit(g, cluster_kind == "svg" ? dendrogram_to_svg(dend) : dendrogram_to_newick(dend));
        } else if (*mds) {
            const auto e = classical_mds(load_matrix_csv(mds_matrix), dims);
            std::cerr << "negative eigenvalues: " << e.negative_eigenvalues << ", clamped axes: " << e.clamped_axes << "\n";
            emit(g, mds_kind == "svg" ? embedding_to_svg(e) : embedding_to_csv(e));
        } else if (*verify) {
            VerifyOptions vo;
            vo.trials = trials;
            vo.seed = g.seed;
            vo.jobs = g.jobs;
            if (!fixtures.empty()) vo.fixtures = fixtures;
            const auto report = run_verify(vo);
            emit(g, report.text());
            return report.ok() ? 0 : 1;
        } else if (*gen) {
            if (g.out.empty()) throw InputError("gen needs --out <directory>");
            fs::create_directories(g.out);
            Rng rng(g.seed);
            const auto format = parse_graph_format(g.format);
            const std::string ext = format == GraphFormat::json ? ".json" : ".txt";
            for (const auto& name : classes) {
                for (std::size_t i = 0; i < count; ++i) {
                    const auto graph = name == "convex" ? random_convex_polygon(rng, std::uniform_int_distribution<std::size_t>(5, 30)(rng))
                                                        : synthetic_shape(parse_shape_class(name), rng, noise);
                    const auto path = fs::path(g.out) / (name + "_" + std::to_string(i) + ext);
                    write_graph(graph, path, format);
                    std::cout << path.string() << "\n";
                }
            }
        }
    } catch (const InputError& e) {
        std::cerr << "abd-kit: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "abd-kit: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
