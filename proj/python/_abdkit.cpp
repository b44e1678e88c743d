#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "abdkit/analysis.hpp"
#include "abdkit/synthetic.hpp"
#include "abdkit/verify.hpp"

namespace py = pybind11;
using namespace abdkit;

namespace {

DistanceOptions distance_options(const std::string& mode, double tol, const std::string& engine) {
    DistanceOptions d;
    if (mode == "exact")
        d.mode = DistanceMode::exact;
    else if (mode == "tolerance")
        d.mode = DistanceMode::tolerance;
    else
        throw InputError("mode must be 'exact' or 'tolerance'");
    if (!(tol > 0.0)) throw InputError("tol must be positive");
    d.tolerance = tol;
    d.engine = parse_engine(engine);
    return d;
}

AbdOptions abd_options(std::size_t frames, const std::string& avg, const std::string& mode, double tol) {
    AbdOptions o;
    o.frames = frames;
    o.average = parse_centering(avg);
    o.distance = distance_options(mode, tol, "optimized");
    return o;
}

}  // namespace

PYBIND11_MODULE(_abdkit, m) {
    m.doc() = "Merge-tree branching distances between planar embedded graphs";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<SizeGuardError>(m, "SizeGuardError", base.ptr());

    py::class_<EmbeddedGraph>(m, "Graph")
        .def(py::init([](const std::vector<std::tuple<VertexId, double, double>>& vertices,
                         const std::vector<std::pair<VertexId, VertexId>>& edges) {
                 std::vector<Vertex> vs;
                 for (const auto& [id, x, y] : vertices) vs.push_back({id, x, y});
                 return EmbeddedGraph::make(std::move(vs), edges);
             }),
             py::arg("vertices"), py::arg("edges"))
        .def_property_readonly("vertices",
                               [](const EmbeddedGraph& g) {
                                   std::vector<std::tuple<VertexId, double, double>> out;
                                   for (const auto& v : g.vertices()) out.emplace_back(v.id, v.x, v.y);
                                   return out;
                               })
        .def_property_readonly("edges",
                               [](const EmbeddedGraph& g) {
                                   std::vector<std::pair<VertexId, VertexId>> out;
                                   for (const auto& e : g.edges()) out.emplace_back(e.u, e.v);
                                   return out;
                               })
        .def("to_json", &graph_to_json)
        .def("largest_component", &largest_component)
        .def("is_connected", py::overload_cast<const EmbeddedGraph&>(&is_connected))
        .def("__eq__", [](const EmbeddedGraph& a, const EmbeddedGraph& b) { return a == b; })
        .def("__repr__", [](const EmbeddedGraph& g) {
            return "<Graph " + std::to_string(g.vertex_count()) + " vertices, " + std::to_string(g.edge_count()) + " edges>";
        });

    m.def("load_graph", [](const std::filesystem::path& p, const std::string& fmt) { return load_graph(p, parse_graph_format(fmt)); },
          py::arg("path"), py::arg("format") = "json");
    m.def("graph_from_json", &parse_graph_json);
    m.def("are_isomorphic", &are_isomorphic);

    py::class_<MergeTree>(m, "MergeTree")
        .def_property_readonly("size", &MergeTree::size)
        .def_property_readonly("leaf_count", &MergeTree::leaf_count)
        .def_property_readonly("is_trivial", &MergeTree::is_trivial)
        .def_property_readonly("values", &MergeTree::values)
        .def("to_json", &merge_tree_to_json)
        .def("shifted", &MergeTree::shifted)
        .def("__repr__", [](const MergeTree& t) { return "<MergeTree " + std::to_string(t.size()) + " nodes>"; });

    m.def("merge_tree_from_json", &parse_merge_tree_json);
    m.def("trivial_tree", &MergeTree::trivial, py::arg("value"), py::arg("id") = 0);
    m.def(
        "merge_tree",
        [](const EmbeddedGraph& g, double angle, std::optional<std::string> normalize) {
            auto mt = compute_merge_tree(collapse_equal_adjacent(direction_filter(largest_component(g), angle)));
            return normalize ? shift_median_zero(mt, parse_centering(*normalize)) : mt;
        },
        py::arg("graph"), py::arg("angle") = 1.5707963267948966, py::arg("normalize") = py::none());
    m.def("value_isomorphic", &value_isomorphic);

    m.def(
        "branching_distance",
        [](const MergeTree& a, const MergeTree& b, const std::string& mode, double tol, const std::string& engine) {
            py::gil_scoped_release release;
            return branching_distance(a, b, distance_options(mode, tol, engine));
        },
        py::arg("a"), py::arg("b"), py::arg("mode") = "exact", py::arg("tol") = 1e-6, py::arg("engine") = "optimized");
    m.def("brute_force_distance", &brute_force_distance);
    m.def("frame_angles", [](std::size_t n) { return frame_angles(n).angles; });
    m.def(
        "average_branching_distance",
        [](const EmbeddedGraph& g, const EmbeddedGraph& h, std::size_t frames, const std::string& avg, const std::string& mode, double tol) {
            py::gil_scoped_release release;
            return average_branching_distance(g, h, abd_options(frames, avg, mode, tol));
        },
        py::arg("g"), py::arg("h"), py::arg("frames") = 10, py::arg("avg") = "median", py::arg("mode") = "exact", py::arg("tol") = 1e-6);

    py::class_<DistanceMatrix>(m, "DistanceMatrix")
        .def(py::init<std::vector<std::string>, const std::vector<std::vector<double>>&>(), py::arg("labels"), py::arg("rows"))
        .def_property_readonly("labels", &DistanceMatrix::labels)
        .def("rows", &DistanceMatrix::rows)
        .def("at", &DistanceMatrix::at)
        .def("validate", &DistanceMatrix::validate)
        .def("to_csv", &matrix_to_csv)
        .def("__len__", &DistanceMatrix::size);
    m.def("matrix_from_csv", &parse_matrix_csv);
    m.def(
        "distance_matrix",
        [](const std::vector<EmbeddedGraph>& graphs, const std::vector<std::string>& labels, std::size_t frames, const std::string& avg,
           unsigned jobs) {
            py::gil_scoped_release release;
            return distance_matrix(graphs, labels, abd_options(frames, avg, "exact", 1e-6), jobs);
        },
        py::arg("graphs"), py::arg("labels"), py::arg("frames") = 10, py::arg("avg") = "median", py::arg("jobs") = 1);

    py::class_<Dendrogram>(m, "Dendrogram")
        .def_readonly("labels", &Dendrogram::labels)
        .def_property_readonly("steps",
                               [](const Dendrogram& d) {
                                   std::vector<std::tuple<std::size_t, std::size_t, double, std::size_t>> out;
                                   for (const auto& s : d.steps) out.emplace_back(s.a, s.b, s.height, s.size);
                                   return out;
                               })
        .def("cut", &cut_clusters, py::arg("k"))
        .def("to_newick", &dendrogram_to_newick)
        .def("to_svg", &dendrogram_to_svg);
    m.def("single_linkage", &single_linkage);
    m.def("cluster_purity", &cluster_purity);

    py::class_<Embedding>(m, "Embedding")
        .def_readonly("labels", &Embedding::labels)
        .def_readonly("coords", &Embedding::coords)
        .def_readonly("eigenvalues", &Embedding::eigenvalues)
        .def_readonly("negative_eigenvalues", &Embedding::negative_eigenvalues)
        .def_readonly("clamped_axes", &Embedding::clamped_axes)
        .def("to_csv", &embedding_to_csv)
        .def("to_svg", &embedding_to_svg, py::arg("groups") = std::vector<std::size_t>{});
    m.def("classical_mds", &classical_mds, py::arg("matrix"), py::arg("k") = 2);

    m.def(
        "synthetic_shape",
        [](const std::string& kind, std::uint64_t seed, double noise) {
            Rng rng(seed);
            return synthetic_shape(parse_shape_class(kind), rng, noise);
        },
        py::arg("kind"), py::arg("seed") = kDefaultSeed, py::arg("noise") = 0.03);
    m.def(
        "random_convex_polygon",
        [](std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            return random_convex_polygon(rng, n);
        },
        py::arg("n"), py::arg("seed") = kDefaultSeed);

    m.def(
        "verify",
        [](std::optional<std::size_t> trials, std::optional<std::filesystem::path> fixtures) {
            VerifyOptions o;
            o.trials = trials;
            if (fixtures) o.fixtures = *fixtures;
            py::gil_scoped_release release;
            const auto r = run_verify(o);
            return std::make_pair(r.ok(), r.text());
        },
        py::arg("trials") = py::none(), py::arg("fixtures") = py::none());
}
