#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "abdkit/abd.hpp"

namespace abdkit {

/// Symmetric, zero-diagonal, non-negative matrix of pairwise distances.
/// The triangle inequality is not assumed.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::vector<std::string> labels);
    DistanceMatrix(std::vector<std::string> labels, const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    double at(std::size_t i, std::size_t j) const { return d_[i * size() + j]; }
    /// Sets both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double value);
    std::vector<std::vector<double>> rows() const;

    /// Throws InputError unless symmetric, zero on the diagonal and non-negative.
    void validate() const;

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::vector<std::string> labels_;
    std::vector<double> d_;
};

/// Pairwise average branching distances. Each graph's frame trees are built
/// once; unordered pairs are spread over `jobs` worker threads. The result
/// does not depend on `jobs`.
DistanceMatrix distance_matrix(const std::vector<EmbeddedGraph>& graphs, const std::vector<std::string>& labels,
                               const AbdOptions& opts = {}, unsigned jobs = 1);

struct MergeStep {
    std::size_t a;  // cluster ids: 0..n-1 are items, n+k is the cluster made at step k
    std::size_t b;
    double height;
    std::size_t size;

    friend bool operator==(const MergeStep&, const MergeStep&) = default;
};

struct Dendrogram {
    std::vector<std::string> labels;
    std::vector<MergeStep> steps;

    std::size_t leaf_count() const { return labels.size(); }
};

/// Single-linkage agglomeration. Among equally close cluster pairs the one
/// with the lexicographically smallest (id, id) pair merges first.
Dendrogram single_linkage(const DistanceMatrix& d);

/// Cluster index per item after undoing the last k-1 merges. Clusters are
/// numbered by their smallest member.
std::vector<std::size_t> cut_clusters(const Dendrogram& dend, std::size_t k);

/// Fraction of items whose cluster's majority label matches their own.
double cluster_purity(const std::vector<std::size_t>& clusters, const std::vector<std::string>& truth);

struct Embedding {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> coords;  // n rows, k columns
    std::vector<double> eigenvalues;          // full spectrum of the centred Gram matrix, descending
    std::size_t negative_eigenvalues = 0;     // below -1e-9 * max|eigenvalue|
    std::size_t clamped_axes = 0;             // selected axes whose eigenvalue was clamped to zero
};

/// Classical (Torgerson) scaling into k dimensions.
Embedding classical_mds(const DistanceMatrix& d, std::size_t k = 2);

// Text formats
std::string matrix_to_csv(const DistanceMatrix& d);
DistanceMatrix parse_matrix_csv(const std::string& text);
DistanceMatrix load_matrix_csv(const std::filesystem::path& path);
std::string dendrogram_to_newick(const Dendrogram& dend);
std::string dendrogram_to_svg(const Dendrogram& dend);
std::string embedding_to_csv(const Embedding& e);
std::string embedding_to_svg(const Embedding& e, const std::vector<std::size_t>& groups = {});
std::string clusters_to_csv(const std::vector<std::string>& labels, const std::vector<std::size_t>& clusters);

enum class ExportKind { csv, newick, svg };

void export_matrix(const DistanceMatrix& d, const std::filesystem::path& path);
void export_dendrogram(const Dendrogram& dend, const std::filesystem::path& path, ExportKind kind);
void export_embedding(const Embedding& e, const std::filesystem::path& path, ExportKind kind);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace abdkit
