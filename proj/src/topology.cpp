#include "pfedgame/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pfedgame/rng.hpp"
#include "pfedgame/util.hpp"

namespace pfedgame {

std::string to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::static_complete: return "static-complete";
        case ScheduleKind::static_random: return "static-random";
        case ScheduleKind::rewire_per_round: return "rewire-per-round";
        case ScheduleKind::similarity_threshold: return "similarity-threshold";
    }
    throw std::invalid_argument("unknown schedule kind");
}

ScheduleKind schedule_kind_from_string(const std::string& s) {
    if (s == "static-complete") return ScheduleKind::static_complete;
    if (s == "static-random") return ScheduleKind::static_random;
    if (s == "rewire-per-round") return ScheduleKind::rewire_per_round;
    if (s == "similarity-threshold") return ScheduleKind::similarity_threshold;
    throw std::invalid_argument("unknown topology kind '" + s + "'");
}

void TopologySchedule::validate() const {
    if (edge_probability < 0.0 || edge_probability > 1.0) {
        throw std::invalid_argument("topology.edge_probability: must be in [0,1]");
    }
    if (rewire_fraction < 0.0 || rewire_fraction > 1.0) {
        throw std::invalid_argument("topology.rewire_fraction: must be in [0,1]");
    }
    if (similarity_threshold < 0.0 || similarity_threshold > 1.0) {
        throw std::invalid_argument("topology.similarity_threshold: must be in [0,1]");
    }
}

bool Adjacency::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::any_of(edges.begin(), edges.end(),
                       [&](const Edge& e) { return e.a == a && e.b == b; });
}

double distribution_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("distribution_similarity: length mismatch");
    }
    double sum_a = 0.0, sum_b = 0.0, tv = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum_a += a[i];
        sum_b += b[i];
        tv += std::abs(a[i] - b[i]);
    }
    if (std::abs(sum_a - 1.0) > 1e-9 || std::abs(sum_b - 1.0) > 1e-9) {
        throw std::invalid_argument("distribution_similarity: inputs must sum to 1");
    }
    return std::clamp(1.0 - 0.5 * tv, 0.0, 1.0);
}

namespace {

void sort_edges(std::vector<Edge>& edges) {
    std::sort(edges.begin(), edges.end(),
              [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
}

std::vector<Edge> complete_edges(int n) {
    std::vector<Edge> edges;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) edges.push_back({a, b, 1.0});
    }
    return edges;
}

std::vector<Edge> random_edges(int n, double p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Edge> edges;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (rng.uniform01() < p) edges.push_back({a, b, 1.0});
        }
    }
    return edges;
}

// Drop `fraction` of base edges and draw the same number of fresh non-edges.
std::vector<Edge> rewire(std::vector<Edge> edges, int n, double fraction, std::uint64_t seed) {
    Rng rng(seed);
    const auto n_rewire =
        static_cast<std::size_t>(std::llround(fraction * double(edges.size())));
    if (n_rewire == 0) return edges;

    std::vector<std::size_t> idx(edges.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);

    std::vector<bool> drop(edges.size(), false);
    for (std::size_t i = 0; i < n_rewire; ++i) drop[idx[i]] = true;

    std::vector<Edge> kept;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!drop[i]) kept.push_back(edges[i]);
    }

    auto present = [&](int a, int b) {
        return std::any_of(kept.begin(), kept.end(),
                           [&](const Edge& e) { return e.a == a && e.b == b; });
    };
    const std::size_t max_edges = static_cast<std::size_t>(n) * (n - 1) / 2;
    std::size_t added = 0;
    while (added < n_rewire && kept.size() < max_edges) {
        int a = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n)));
        int b = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n)));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (present(a, b)) continue;
        kept.push_back({a, b, 1.0});
        ++added;
    }
    return kept;
}

}  // namespace

Adjacency adjacency_at(const TopologySchedule& schedule, int num_nodes, int round,
                       const std::vector<std::vector<double>>& histograms) {
    schedule.validate();
    if (num_nodes < 1) throw std::invalid_argument("adjacency_at: num_nodes must be >= 1");
    if (round < 0) throw std::invalid_argument("adjacency_at: round must be >= 0");

    Adjacency adj;
    adj.num_nodes = num_nodes;
    switch (schedule.kind) {
        case ScheduleKind::static_complete:
            adj.edges = complete_edges(num_nodes);
            break;
        case ScheduleKind::static_random:
            adj.edges = random_edges(num_nodes, schedule.edge_probability,
                                     derive_seed(schedule.seed, 0x626173ULL));
            break;
        case ScheduleKind::rewire_per_round: {
            auto base = random_edges(num_nodes, schedule.edge_probability,
                                     derive_seed(schedule.seed, 0x626173ULL));
            adj.edges = rewire(std::move(base), num_nodes, schedule.rewire_fraction,
                               derive_seed(schedule.seed, 0x726577ULL,
                                           static_cast<std::uint64_t>(round)));
            break;
        }
        case ScheduleKind::similarity_threshold: {
            if (histograms.size() != static_cast<std::size_t>(num_nodes)) {
                throw std::invalid_argument(
                    "adjacency_at: similarity-threshold needs one histogram per node");
            }
            for (int a = 0; a < num_nodes; ++a) {
                for (int b = a + 1; b < num_nodes; ++b) {
                    const double sim = distribution_similarity(histograms[a], histograms[b]);
                    if (sim >= schedule.similarity_threshold) adj.edges.push_back({a, b, sim});
                }
            }
            break;
        }
    }
    sort_edges(adj.edges);
    return adj;
}

std::set<int> neighbors(const Adjacency& adj, int x) {
    if (x < 0 || x >= adj.num_nodes) {
        throw std::invalid_argument("neighbors: unknown node id " + std::to_string(x));
    }
    std::set<int> out;
    for (const Edge& e : adj.edges) {
        if (e.a == x) out.insert(e.b);
        if (e.b == x) out.insert(e.a);
    }
    return out;
}

std::string edge_list_lines(int round, const Adjacency& adj) {
    std::string out;
    for (const Edge& e : adj.edges) {
        out += std::to_string(round);
        out += ',';
        out += std::to_string(e.a);
        out += ',';
        out += std::to_string(e.b);
        out += ',';
        out += format_double(e.weight);
        out += '\n';
    }
    return out;
}

}  // namespace pfedgame
