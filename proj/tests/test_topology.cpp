#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pfedgame/topology.hpp"

using namespace pfedgame;

namespace {

std::vector<std::vector<double>> one_hot_histograms(int n) {
    std::vector<std::vector<double>> h(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) h[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    return h;
}

}  // namespace

TEST_CASE("distribution_similarity values") {
    CHECK(distribution_similarity({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}) == 1.0);
    CHECK(distribution_similarity({1.0, 0.0}, {0.0, 1.0}) == 0.0);
    // hand-computed: TV = 0.5*(0.5 + 0 + 0.5) = 0.5
    CHECK(distribution_similarity({0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("distribution_similarity is symmetric and validates inputs") {
    const std::vector<double> a = {0.7, 0.2, 0.1};
    const std::vector<double> b = {0.1, 0.1, 0.8};
    CHECK(distribution_similarity(a, b) == distribution_similarity(b, a));
    CHECK_THROWS_AS(distribution_similarity({0.5, 0.5}, {1.0, 0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(distribution_similarity({0.5, 0.4}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("static-complete has all pairs at every round") {
    TopologySchedule s;
    s.kind = ScheduleKind::static_complete;
    for (int t : {0, 1, 17}) {
        const Adjacency adj = adjacency_at(s, 4, t, {});
        CHECK(adj.edges.size() == 6);
        for (const Edge& e : adj.edges) {
            CHECK(e.a < e.b);
            CHECK(e.weight == 1.0);
        }
    }
}

TEST_CASE("similarity-threshold over disjoint shards yields no edges") {
    TopologySchedule s;
    s.kind = ScheduleKind::similarity_threshold;
    s.similarity_threshold = 0.9;
    const Adjacency adj = adjacency_at(s, 5, 0, one_hot_histograms(5));
    CHECK(adj.edges.empty());
}

TEST_CASE("similarity-threshold zero gives a complete graph with similarity weights") {
    TopologySchedule s;
    s.kind = ScheduleKind::similarity_threshold;
    s.similarity_threshold = 0.0;
    const std::vector<std::vector<double>> h = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.5, 0.0}};
    const Adjacency adj = adjacency_at(s, 3, 0, h);
    CHECK(adj.edges.size() == 3);
    CHECK(adj.has_edge(0, 2));
    for (const Edge& e : adj.edges) {
        CHECK(e.weight == distribution_similarity(h[static_cast<std::size_t>(e.a)],
                                                  h[static_cast<std::size_t>(e.b)]));
    }
}

TEST_CASE("rewire-per-round with fraction zero is constant in t") {
    TopologySchedule s;
    s.kind = ScheduleKind::rewire_per_round;
    s.edge_probability = 0.5;
    s.rewire_fraction = 0.0;
    s.seed = 9;
    const Adjacency a0 = adjacency_at(s, 8, 0, {});
    const Adjacency a5 = adjacency_at(s, 8, 5, {});
    CHECK(a0.edges == a5.edges);
}

TEST_CASE("rewire-per-round is deterministic per round and varies across rounds") {
    TopologySchedule s;
    s.kind = ScheduleKind::rewire_per_round;
    s.edge_probability = 0.5;
    s.rewire_fraction = 0.4;
    s.seed = 3;
    const Adjacency x = adjacency_at(s, 10, 2, {});
    const Adjacency y = adjacency_at(s, 10, 2, {});
    CHECK(x.edges == y.edges);
    // edge count is preserved by rewiring
    const Adjacency base = adjacency_at(s, 10, 0, {});
    CHECK(x.edges.size() == base.edges.size());

    bool any_diff = false;
    for (int t = 0; t < 6 && !any_diff; ++t) {
        any_diff = !(adjacency_at(s, 10, t, {}).edges == x.edges);
    }
    CHECK(any_diff);
}

TEST_CASE("static-random is deterministic and t-independent") {
    TopologySchedule s;
    s.kind = ScheduleKind::static_random;
    s.edge_probability = 0.4;
    s.seed = 5;
    const Adjacency a = adjacency_at(s, 9, 0, {});
    const Adjacency b = adjacency_at(s, 9, 123, {});
    CHECK(a.edges == b.edges);
    for (const Edge& e : a.edges) {
        CHECK(e.a != e.b);
        CHECK(e.a >= 0);
        CHECK(e.b < 9);
    }
}

TEST_CASE("neighbors") {
    TopologySchedule s;
    s.kind = ScheduleKind::static_complete;
    const Adjacency complete = adjacency_at(s, 3, 0, {});
    CHECK(neighbors(complete, 0) == std::set<int>{1, 2});

    Adjacency empty;
    empty.num_nodes = 3;
    CHECK(neighbors(empty, 1).empty());

    Adjacency path;  // 0 - 1 - 2
    path.num_nodes = 3;
    path.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
    CHECK(neighbors(path, 1) == std::set<int>{0, 2});
    CHECK(neighbors(path, 0) == std::set<int>{1});

    CHECK_THROWS_AS(neighbors(path, 3), std::invalid_argument);
    CHECK_THROWS_AS(neighbors(path, -1), std::invalid_argument);
}

TEST_CASE("neighbor relation is symmetric across schedules and rounds") {
    for (auto kind : {ScheduleKind::static_random, ScheduleKind::rewire_per_round}) {
        TopologySchedule s;
        s.kind = kind;
        s.edge_probability = 0.5;
        s.rewire_fraction = 0.3;
        s.seed = 11;
        for (int t = 0; t < 4; ++t) {
            const Adjacency adj = adjacency_at(s, 7, t, {});
            for (int x = 0; x < 7; ++x) {
                for (int y : neighbors(adj, x)) {
                    CHECK(y != x);
                    CHECK(neighbors(adj, y).count(x) == 1);
                }
            }
        }
    }
}

TEST_CASE("edge list export format") {
    Adjacency adj;
    adj.num_nodes = 3;
    adj.edges = {{0, 1, 1.0}, {1, 2, 0.5}};
    CHECK(edge_list_lines(4, adj) == "4,0,1,1\n4,1,2,0.5\n");
}
