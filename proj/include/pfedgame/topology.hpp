#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace pfedgame {

enum class ScheduleKind { static_complete, static_random, rewire_per_round, similarity_threshold };

std::string to_string(ScheduleKind k);
ScheduleKind schedule_kind_from_string(const std::string& s);

/// Pure description of how the participant graph evolves. The adjacency at
/// round t is a function of (kind, params, seed, t, node count) only.
///   static-complete:      every pair connected at every round
///   static-random:        Erdos-Renyi(edge_probability), same at every round
///   rewire-per-round:     the static-random base with `rewire_fraction` of
///                         its edges re-drawn under a seed mixed with t
///   similarity-threshold: edge (a,b) present iff the label-distribution
///                         similarity is >= threshold; weight = similarity
struct TopologySchedule {
    ScheduleKind kind = ScheduleKind::static_complete;
    double edge_probability = 0.5;     // static-random, rewire-per-round
    double rewire_fraction = 0.2;      // rewire-per-round
    double similarity_threshold = 0.0; // similarity-threshold
    std::uint64_t seed = 0;

    void validate() const;
};

struct Edge {
    int a = 0;  // a < b
    int b = 0;
    double weight = 1.0;

    bool operator==(const Edge&) const = default;
};

/// Immutable undirected graph snapshot: no self-loops, weights in [0,1].
struct Adjacency {
    int num_nodes = 0;
    std::vector<Edge> edges;  // sorted by (a, b)

    bool has_edge(int a, int b) const;
};

/// 1 - total-variation distance between two label-frequency vectors.
/// Symmetric, 1 exactly on identical inputs, 0 on disjoint supports.
double distribution_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Graph at round t. `histograms` (one per node) is only consulted by the
/// similarity-threshold kind.
Adjacency adjacency_at(const TopologySchedule& schedule, int num_nodes, int round,
                       const std::vector<std::vector<double>>& histograms);

/// All y with an (x, y) edge; never contains x. Errors on unknown ids.
std::set<int> neighbors(const Adjacency& adj, int x);

/// Edge-list lines `t,node_a,node_b,weight` for offline graph analysis.
std::string edge_list_lines(int round, const Adjacency& adj);

}  // namespace pfedgame
