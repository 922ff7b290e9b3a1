#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pfedgame {

/// Dense feature matrix with integer class labels.
struct Dataset {
    std::vector<double> features;  // row-major, n x dim
    std::vector<int> labels;       // length n, values in [0, num_classes)
    std::size_t dim = 0;
    std::size_t num_classes = 0;

    std::size_t n() const { return labels.size(); }
    const double* row(std::size_t i) const { return features.data() + i * dim; }

    void append_row(const double* x, int label);

    /// Throws std::invalid_argument on shape/label-range violations.
    void validate() const;
};

/// One participant's local shard, split into disjoint train/test sets.
struct NodeData {
    Dataset train;
    Dataset test;
};

enum class HeterogeneityMode { extreme, severe, modest, homogeneous };

std::string to_string(HeterogeneityMode m);
HeterogeneityMode heterogeneity_mode_from_string(const std::string& s);

/// How the global dataset is sharded across participants.
///   extreme:      classes split evenly across k=5 nodes (2 classes each for c=10)
///   severe:       classes split evenly across k=10 nodes (1 class each for c=10)
///   homogeneous:  every class dealt evenly to all k=10 nodes
///   modest:       each node gets `majority_fraction` of its rows from a
///                 designated class set, the rest spread over other classes
/// k is overridable; the defaults above are the preset values.
struct PartitionMode {
    HeterogeneityMode mode = HeterogeneityMode::extreme;
    int k = 5;
    double majority_fraction = 0.8;  // modest only

    void validate() const;
};

int default_k(HeterogeneityMode m);

/// Gaussian class blobs: unit within-class variance, centroids placed
/// pairwise exactly `separation` apart (requires dim >= num_classes).
/// Rows are grouped by class; labels ascend. Deterministic per seed.
Dataset generate_synthetic(std::size_t num_classes, std::size_t dim, std::size_t per_class,
                           double separation, std::uint64_t seed);

/// CSV schema: header `f0,...,f{d-1},label`; decimal reals, base-10 integer
/// label, comma separator, no quoting. num_classes is inferred as
/// max(label)+1. Errors name the offending line.
Dataset load_csv(const std::string& path);

/// Same, but labels are range-checked against a known class count.
Dataset load_csv(const std::string& path, std::size_t expected_num_classes);

/// Shards `data` into k disjoint node datasets covering every row, then
/// splits each shard 80/20 train/test stratified by class.
std::vector<NodeData> partition(const Dataset& data, const PartitionMode& mode,
                                std::uint64_t seed);

/// Class frequency vector (sums to 1). Errors on an empty dataset.
std::vector<double> label_histogram(const Dataset& data);

/// Histogram over a node's full shard (train and test rows together).
std::vector<double> shard_histogram(const NodeData& nd);

}  // namespace pfedgame
