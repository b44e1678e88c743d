#pragma once

#include <filesystem>
#include <tuple>
#include <vector>

#include "abdkit/merge_tree.hpp"
#include "abdkit/verify.hpp"

namespace testing {

// Builds a merge tree from (id, value, parent id) triples; the root names itself.
inline abdkit::MergeTree tree(const std::vector<std::tuple<abdkit::NodeId, double, abdkit::NodeId>>& triples) {
    std::vector<abdkit::MergeTreeNode> nodes;
    for (const auto& [id, value, parent] : triples) {
        std::size_t p = 0;
        for (std::size_t i = 0; i < triples.size(); ++i)
            if (std::get<0>(triples[i]) == parent) p = i;
        nodes.push_back({id, value, p, std::nullopt});
    }
    return abdkit::MergeTree::make(std::move(nodes));
}

inline abdkit::ScalarGraph path_graph(const std::vector<double>& values) {
    std::vector<abdkit::ScalarVertex> vs;
    std::vector<std::pair<abdkit::VertexId, abdkit::VertexId>> es;
    for (std::size_t i = 0; i < values.size(); ++i) {
        vs.push_back({static_cast<abdkit::VertexId>(i), values[i]});
        if (i > 0) es.emplace_back(static_cast<abdkit::VertexId>(i - 1), static_cast<abdkit::VertexId>(i));
    }
    return abdkit::ScalarGraph::make(std::move(vs), std::move(es));
}

inline std::filesystem::path fixture(const std::string& name) { return abdkit::default_fixture_dir() / name; }

inline std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "abdkit-tests";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing
