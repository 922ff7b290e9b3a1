#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfedgame/dataset.hpp"
#include "pfedgame/game.hpp"
#include "pfedgame/model.hpp"
#include "pfedgame/topology.hpp"

namespace pfedgame {

enum class Algorithm { pfedgame, fedavg_central, local_only };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// Whether per-node round work runs through the OpenMP loops or the plain
/// serial loop. Both paths produce identical results; the serial one is kept
/// as the reference for tests and the bench tool.
enum class ExecMode { serial, openmp };

std::string to_string(ExecMode m);
ExecMode exec_mode_from_string(const std::string& s);

struct SyntheticSpec {
    std::size_t num_classes = 10;
    std::size_t dim = 20;
    std::size_t per_class = 200;
    double separation = 4.0;
};

struct DatasetSource {
    enum class Type { synthetic, csv };
    Type type = Type::synthetic;
    SyntheticSpec synthetic;
    std::string csv_path;
    std::size_t csv_num_classes = 0;  // 0 = infer from the file

    void validate() const;
};

/// Full description of one simulation run. The metric stream is a pure
/// function of this struct.
struct SimConfig {
    int rounds = 20;  // T
    Algorithm algorithm = Algorithm::pfedgame;
    ModelKind model_kind = ModelKind::softmax_regression;
    std::size_t hidden_dim = 32;  // mlp-1hidden only
    GameConfig game;
    TrainConfig train;  // train.seed is ignored here; seeds derive from master_seed
    TopologySchedule topology;
    PartitionMode partition;
    DatasetSource dataset;
    std::uint64_t master_seed = 1;
    ExecMode exec = ExecMode::openmp;

    void validate() const;
};

struct NodeMetrics {
    int node = 0;
    double accuracy = 0.0;  // on the node's local test shard
    int peer_count = 0;     // |C(x)|
    double psi_x = 0.0;
    bool skipped = false;   // aggregation skipped (empty C(x))
};

struct RoundMetrics {
    int fl_round = 0;
    std::vector<NodeMetrics> per_node;
    double mean_accuracy = 0.0;
};

/// Mutable per-node simulation state between rounds.
struct SimState {
    std::vector<Model> models;
    std::vector<NodeData> data;
    std::vector<std::vector<double>> histograms;  // label histogram per shard

    int num_nodes() const { return static_cast<int>(models.size()); }
};

struct NodeRoundTrace {
    int fl_round = 0;
    int node = 0;
    std::vector<TraceEntry> trace;
};

struct SimulationResult {
    std::vector<RoundMetrics> rounds;
    std::vector<Model> final_models;
    std::vector<NodeRoundTrace> game_traces;  // pfedgame only
    std::vector<Adjacency> adjacency_log;     // per round, pfedgame only
};

/// Seed for node i's local training in round t. A pure function of
/// (master_seed, node, round), so parallel and sequential execution see the
/// same per-node streams.
std::uint64_t train_seed(std::uint64_t master_seed, int node, int round);

/// Builds dataset, shards, histograms and per-node initial models.
SimState setup_state(const SimConfig& cfg);

/// One FL round: (1) every node trains locally from its current model,
/// (2) an immutable snapshot of all post-training models is taken,
/// (3) the round's adjacency is computed, (4) per node: peer selection then
/// aggregation against the snapshot, (5) the aggregate replaces the node
/// model. Metrics are evaluated after step 5.
RoundMetrics run_round(SimState& state, int t, const SimConfig& cfg,
                       SimulationResult* artifacts = nullptr);

SimulationResult run_simulation(const SimConfig& cfg);

struct RepeatSummary {
    std::vector<SimulationResult> runs;
    std::vector<double> round_mean;  // mean over repeats of per-round mean accuracy
    std::vector<double> round_std;   // population standard deviation
};

/// Repeat i runs with master_seed + i (and topology.seed + i).
RepeatSummary repeat_and_average(const SimConfig& cfg, int n_repeats);

}  // namespace pfedgame
