#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "pfedgame/dataset.hpp"
#include "pfedgame/model.hpp"

namespace pfedgame {

/// Knobs of one pFedGame aggregation: theta gates peer selection, beta is the
/// minimum accuracy difference treated as significant, delta is the utility
/// step per game round, rounds is the number of game rounds.
struct GameConfig {
    double theta = 0.5;
    double beta = 0.001;
    double delta = 0.1;
    int rounds = 10;
    bool early_exit = false;  // stop at the first rejected proposal

    void validate() const;  // theta in [0,1], beta >= 0, delta in (0,1], delta*rounds <= 1
};

/// Peers (possibly including the selecting node itself) whose models scored
/// at least theta on the selecting node's test data.
struct PeerSet {
    std::set<int> members;
    int accuracy_evals = 0;  // exactly |candidates|+1 by construction

    std::size_t size() const { return members.size(); }
    bool contains(int id) const { return members.count(id) > 0; }
};

struct TraceEntry {
    int game_round = 0;        // 1-based
    double psi_x = 0.0;        // after this round's decision
    double candidate_acc = 0.0;
    bool accepted = false;
};

/// Final state of one aggregation game. psi_x + psi_alpha == 1 at every step
/// and psi_x is always an exact integer multiple of delta.
struct GameState {
    double psi_x = 0.0;
    double psi_alpha = 1.0;
    Model gamma;
    std::vector<TraceEntry> trace;
    int accepted_steps = 0;
    double initial_acc = 0.0;  // accuracy of the uniform peer aggregate
    double final_acc = 0.0;
    int accuracy_evals = 0;
};

/// Grid-domain trace of the game decision loop, for oracle tests: the same
/// loop pfedgame_aggregate runs, with the accuracy landscape injected.
struct PlayStep {
    int game_round = 0;
    int psi_steps = 0;  // accepted steps so far, i.e. psi_x / delta
    double candidate_acc = 0.0;
    bool accepted = false;
};

struct PlayResult {
    std::vector<PlayStep> steps;
    int accepted_steps = 0;
    double initial_acc = 0.0;
    double final_acc = 0.0;
    int eval_count = 0;
};

/// The decision loop: starting from psi_x = 0, propose psi_x + delta each
/// round and accept when the accuracy at the proposal differs by at least
/// beta and does not decrease. acc_at(k) is the accuracy of the mixture with
/// psi_x = k*delta.
PlayResult pfedgame_play(const std::function<double(int)>& acc_at, const GameConfig& cfg);

/// Filters candidates (plus x itself) by accuracy >= theta on test_data.
/// Performs exactly |candidates|+1 accuracy evaluations.
PeerSet peer_selection(int x, const std::set<int>& candidates,
                       const std::map<int, Model>& models, const Dataset& test_data,
                       double theta);

/// Two-player constant-sum game between M(x) and the uniform aggregate of
/// the selected peers' models. Returns the aggregated model and the game
/// state; accuracy is measured on dx.test throughout.
GameState pfedgame_aggregate(int x, const PeerSet& peers, const std::map<int, Model>& models,
                             const NodeData& dx, const GameConfig& cfg);

/// Size-weighted central aggregation (the FedAvg baseline step).
Model fedavg_baseline_round(const std::map<int, Model>& models,
                            const std::map<int, std::int64_t>& train_sizes);

/// Train on the local shard only; no communication.
Model local_only_baseline(const Model& model, const NodeData& dx, const TrainConfig& cfg);

}  // namespace pfedgame
