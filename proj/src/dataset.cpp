#include "pfedgame/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pfedgame/rng.hpp"

namespace pfedgame {

void Dataset::append_row(const double* x, int label) {
    features.insert(features.end(), x, x + dim);
    labels.push_back(label);
}

void Dataset::validate() const {
    if (num_classes < 1) throw std::invalid_argument("Dataset: num_classes must be >= 1");
    if (features.size() != labels.size() * dim) {
        throw std::invalid_argument("Dataset: feature matrix is not n x dim");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes) {
            throw std::invalid_argument("Dataset: label out of range at row " + std::to_string(i));
        }
    }
}

std::string to_string(HeterogeneityMode m) {
    switch (m) {
        case HeterogeneityMode::extreme: return "extreme";
        case HeterogeneityMode::severe: return "severe";
        case HeterogeneityMode::modest: return "modest";
        case HeterogeneityMode::homogeneous: return "homogeneous";
    }
    throw std::invalid_argument("unknown heterogeneity mode");
}

HeterogeneityMode heterogeneity_mode_from_string(const std::string& s) {
    if (s == "extreme") return HeterogeneityMode::extreme;
    if (s == "severe") return HeterogeneityMode::severe;
    if (s == "modest") return HeterogeneityMode::modest;
    if (s == "homogeneous") return HeterogeneityMode::homogeneous;
    throw std::invalid_argument("unknown partition mode '" + s + "'");
}

int default_k(HeterogeneityMode m) {
    switch (m) {
        case HeterogeneityMode::extreme: return 5;
        case HeterogeneityMode::severe: return 10;
        case HeterogeneityMode::homogeneous: return 10;
        case HeterogeneityMode::modest: return 5;
    }
    throw std::invalid_argument("unknown heterogeneity mode");
}

void PartitionMode::validate() const {
    if (k < 1) throw std::invalid_argument("partition.k: must be >= 1");
    if (mode == HeterogeneityMode::modest &&
        (majority_fraction <= 0.0 || majority_fraction > 1.0)) {
        throw std::invalid_argument("partition.majority_fraction: must be in (0,1]");
    }
}

Dataset generate_synthetic(std::size_t num_classes, std::size_t dim, std::size_t per_class,
                           double separation, std::uint64_t seed) {
    if (num_classes < 2) throw std::invalid_argument("generate_synthetic: num_classes must be >= 2");
    if (per_class < 2) throw std::invalid_argument("generate_synthetic: per_class must be >= 2");
    if (dim < num_classes) {
        throw std::invalid_argument(
            "generate_synthetic: dim must be >= num_classes for centroid placement");
    }
    if (!(separation > 0.0)) {
        throw std::invalid_argument("generate_synthetic: separation must be positive");
    }

    // Centroid of class j sits at (separation/sqrt(2)) * e_j, which makes all
    // pairwise centroid distances exactly `separation`.
    const double scale = separation / std::sqrt(2.0);

    Dataset out;
    out.dim = dim;
    out.num_classes = num_classes;
    out.features.reserve(num_classes * per_class * dim);
    out.labels.reserve(num_classes * per_class);

    Rng rng(seed);
    std::vector<double> row(dim);
    for (std::size_t cls = 0; cls < num_classes; ++cls) {
        for (std::size_t i = 0; i < per_class; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                row[j] = (j == cls ? scale : 0.0) + rng.normal();
            }
            out.append_row(row.data(), static_cast<int>(cls));
        }
    }
    out.validate();
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_real(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad real value '" +
                                 s + "'");
    }
    return v;
}

int parse_label(const std::string& s, std::size_t line_no) {
    int v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad label '" + s +
                                 "'");
    }
    return v;
}

}  // namespace

namespace {

Dataset load_csv_impl(const std::string& path, std::size_t expected_num_classes) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open csv: " + path);

    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("csv " + path + ": missing header");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "label") {
        throw std::runtime_error("csv " + path + ": header must be f0,...,f{d-1},label");
    }
    const std::size_t dim = header.size() - 1;
    for (std::size_t j = 0; j < dim; ++j) {
        if (header[j] != "f" + std::to_string(j)) {
            throw std::runtime_error("csv " + path + ": header column " + std::to_string(j) +
                                     " must be f" + std::to_string(j));
        }
    }

    Dataset out;
    out.dim = dim;
    std::vector<double> row(dim);
    int max_label = -1;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != dim + 1) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(dim + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < dim; ++j) row[j] = parse_real(fields[j], line_no);
        const int label = parse_label(fields[dim], line_no);
        if (label < 0) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": negative label");
        }
        if (expected_num_classes > 0 &&
            static_cast<std::size_t>(label) >= expected_num_classes) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": label " +
                                     std::to_string(label) + " out of range [0," +
                                     std::to_string(expected_num_classes) + ")");
        }
        max_label = std::max(max_label, label);
        out.append_row(row.data(), label);
    }
    out.num_classes =
        expected_num_classes > 0 ? expected_num_classes : static_cast<std::size_t>(max_label + 1);
    if (out.n() == 0) throw std::runtime_error("csv " + path + ": no data rows");
    out.validate();
    return out;
}

}  // namespace

Dataset load_csv(const std::string& path) { return load_csv_impl(path, 0); }

Dataset load_csv(const std::string& path, std::size_t expected_num_classes) {
    if (expected_num_classes < 1) {
        throw std::invalid_argument("load_csv: expected_num_classes must be >= 1");
    }
    return load_csv_impl(path, expected_num_classes);
}

namespace {

// Row indices of each class, each list shuffled under its own derived seed.
std::vector<std::vector<std::size_t>> rows_by_class(const Dataset& data, std::uint64_t seed) {
    std::vector<std::vector<std::size_t>> by_class(data.num_classes);
    for (std::size_t i = 0; i < data.n(); ++i) {
        by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
    }
    for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
        Rng rng(derive_seed(seed, 0x726f7773ULL, cls));
        rng.shuffle(by_class[cls]);
    }
    return by_class;
}

// class id -> owning node, classes dealt round-robin over a shuffled order
std::vector<int> assign_class_owners(std::size_t num_classes, int k, std::uint64_t seed) {
    std::vector<std::size_t> order(num_classes);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, 0x636c73ULL));
    rng.shuffle(order);
    std::vector<int> owner(num_classes, 0);
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
        owner[order[idx]] = static_cast<int>(idx % static_cast<std::size_t>(k));
    }
    return owner;
}

// node -> list of row indices, grouped by class in class order
using Shards = std::vector<std::vector<std::size_t>>;

Shards shard_by_class_ownership(const std::vector<std::vector<std::size_t>>& by_class,
                                const std::vector<int>& owner, int k) {
    Shards shards(static_cast<std::size_t>(k));
    for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
        auto& dst = shards[static_cast<std::size_t>(owner[cls])];
        dst.insert(dst.end(), by_class[cls].begin(), by_class[cls].end());
    }
    return shards;
}

Shards shard_homogeneous(const std::vector<std::vector<std::size_t>>& by_class, int k) {
    Shards shards(static_cast<std::size_t>(k));
    const std::size_t uk = static_cast<std::size_t>(k);
    for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
        const auto& rows = by_class[cls];
        const std::size_t base = rows.size() / uk;
        const std::size_t extra = rows.size() % uk;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < uk; ++i) {
            // rotate which nodes absorb the remainder so no node accumulates it
            const std::size_t take = base + (((i + cls) % uk) < extra ? 1 : 0);
            shards[i].insert(shards[i].end(), rows.begin() + pos, rows.begin() + pos + take);
            pos += take;
        }
    }
    return shards;
}

Shards build_modest_shards(const std::vector<std::vector<std::size_t>>& by_class,
                           const std::vector<int>& owner, int k, double owner_share) {
    const std::size_t uk = static_cast<std::size_t>(k);
    Shards shards(uk);
    for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
        const auto& rows = by_class[cls];
        const std::size_t own_node = static_cast<std::size_t>(owner[cls]);
        const std::size_t take =
            std::min(rows.size(),
                     static_cast<std::size_t>(std::ceil(owner_share * double(rows.size()))));
        shards[own_node].insert(shards[own_node].end(), rows.begin(), rows.begin() + take);

        const std::size_t rest = rows.size() - take;
        const std::size_t others = uk - 1;
        std::size_t pos = take;
        for (std::size_t s = 0; s < others; ++s) {
            const std::size_t node = (own_node + 1 + s) % uk;
            // rotate which non-owners absorb the remainder, per class
            const std::size_t rot = (s + cls) % others;
            const std::size_t give = rest / others + (rot < rest % others ? 1 : 0);
            shards[node].insert(shards[node].end(), rows.begin() + pos, rows.begin() + pos + give);
            pos += give;
        }
    }
    return shards;
}

bool modest_shards_ok(const Shards& shards, const std::vector<int>& owner,
                      const std::vector<int>& labels, double majority_fraction) {
    for (std::size_t node = 0; node < shards.size(); ++node) {
        if (shards[node].empty()) continue;
        std::size_t designated = 0;
        for (std::size_t row : shards[node]) {
            if (owner[static_cast<std::size_t>(labels[row])] == static_cast<int>(node)) {
                ++designated;
            }
        }
        if (double(designated) < majority_fraction * double(shards[node].size())) return false;
    }
    return true;
}

Shards shard_modest(const std::vector<std::vector<std::size_t>>& by_class,
                    const std::vector<int>& owner, int k, double majority_fraction,
                    const std::vector<int>& labels) {
    if (k == 1) return shard_by_class_ownership(by_class, owner, k);

    // Smallest per-class owner share that still gives every node at least
    // majority_fraction designated rows, assuming the remainder of each class
    // spreads evenly over the other k-1 nodes.
    const double f = majority_fraction;
    double share = 0.0;
    for (int node = 0; node < k; ++node) {
        double owned = 0.0, other = 0.0;
        for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
            (owner[cls] == node ? owned : other) += double(by_class[cls].size());
        }
        if (owned == 0.0) {
            throw std::invalid_argument("modest partition: node " + std::to_string(node) +
                                        " owns no classes (k must be <= num_classes)");
        }
        const double x = f * other / (owned * (1.0 - f) * double(k - 1) + f * other);
        share = std::max(share, x);
    }

    // Integer rounding can undershoot the target by a hair; nudge the share
    // up until every shard meets the fraction. share=1 always satisfies it.
    for (;; share = std::min(1.0, share + 0.01)) {
        Shards shards = build_modest_shards(by_class, owner, k, share);
        if (modest_shards_ok(shards, owner, labels, f)) return shards;
        if (share >= 1.0) return shards;  // unreachable: share=1 is all-designated
    }
}

// Stratified 80/20 split. Shard rows arrive grouped by class.
NodeData split_shard(const Dataset& data, const std::vector<std::size_t>& rows) {
    NodeData nd;
    nd.train.dim = nd.test.dim = data.dim;
    nd.train.num_classes = nd.test.num_classes = data.num_classes;

    std::vector<std::vector<std::size_t>> by_class(data.num_classes);
    for (std::size_t r : rows) by_class[static_cast<std::size_t>(data.labels[r])].push_back(r);

    for (const auto& cls_rows : by_class) {
        const std::size_t m = cls_rows.size();
        if (m == 0) continue;
        std::size_t train_m;
        if (m == 1) {
            train_m = 1;
        } else {
            const auto want = static_cast<std::size_t>(std::llround(0.8 * double(m)));
            train_m = std::clamp<std::size_t>(want, 1, m - 1);
        }
        for (std::size_t i = 0; i < m; ++i) {
            auto& dst = (i < train_m) ? nd.train : nd.test;
            dst.append_row(data.row(cls_rows[i]), data.labels[cls_rows[i]]);
        }
    }
    return nd;
}

}  // namespace

std::vector<NodeData> partition(const Dataset& data, const PartitionMode& mode,
                                std::uint64_t seed) {
    mode.validate();
    data.validate();
    if (data.n() == 0) throw std::invalid_argument("partition: empty dataset");
    const int k = mode.k;
    if (static_cast<std::size_t>(k) > data.n()) {
        throw std::invalid_argument("partition: more nodes than rows");
    }

    const auto by_class = rows_by_class(data, seed);
    Shards shards;
    switch (mode.mode) {
        case HeterogeneityMode::extreme:
        case HeterogeneityMode::severe: {
            if (data.num_classes % static_cast<std::size_t>(k) != 0) {
                throw std::invalid_argument("partition: num_classes (" +
                                            std::to_string(data.num_classes) +
                                            ") not divisible by k (" + std::to_string(k) + ")");
            }
            shards = shard_by_class_ownership(by_class, assign_class_owners(data.num_classes, k, seed), k);
            break;
        }
        case HeterogeneityMode::homogeneous:
            shards = shard_homogeneous(by_class, k);
            break;
        case HeterogeneityMode::modest: {
            if (static_cast<std::size_t>(k) > data.num_classes) {
                throw std::invalid_argument("partition: modest requires k <= num_classes");
            }
            const auto owner = assign_class_owners(data.num_classes, k, seed);
            shards = shard_modest(by_class, owner, k, mode.majority_fraction, data.labels);
            break;
        }
    }

    std::vector<NodeData> out;
    out.reserve(shards.size());
    for (const auto& s : shards) out.push_back(split_shard(data, s));
    return out;
}

std::vector<double> label_histogram(const Dataset& data) {
    if (data.n() == 0) throw std::invalid_argument("label_histogram: empty dataset");
    std::vector<double> freq(data.num_classes, 0.0);
    for (int l : data.labels) freq[static_cast<std::size_t>(l)] += 1.0;
    for (double& f : freq) f /= double(data.n());
    return freq;
}

std::vector<double> shard_histogram(const NodeData& nd) {
    const std::size_t total = nd.train.n() + nd.test.n();
    if (total == 0) throw std::invalid_argument("shard_histogram: empty shard");
    std::vector<double> freq(nd.train.num_classes, 0.0);
    for (int l : nd.train.labels) freq[static_cast<std::size_t>(l)] += 1.0;
    for (int l : nd.test.labels) freq[static_cast<std::size_t>(l)] += 1.0;
    for (double& f : freq) f /= double(total);
    return freq;
}

}  // namespace pfedgame
