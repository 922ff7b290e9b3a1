#include "pfedgame/simulator.hpp"

#include <cmath>
#include <exception>
#include <map>
#include <stdexcept>
#include <utility>

#include "pfedgame/log.hpp"
#include "pfedgame/rng.hpp"

namespace pfedgame {

namespace {
// seed-derivation tags
constexpr std::uint64_t kSeedData = 0xDA7AULL;
constexpr std::uint64_t kSeedPartition = 0xBA27ULL;
constexpr std::uint64_t kSeedInit = 0x1247ULL;
constexpr std::uint64_t kSeedTrain = 0x7247ULL;
}  // namespace

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::pfedgame: return "pfedgame";
        case Algorithm::fedavg_central: return "fedavg-central";
        case Algorithm::local_only: return "local-only";
    }
    throw std::invalid_argument("unknown algorithm");
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "pfedgame") return Algorithm::pfedgame;
    if (s == "fedavg-central") return Algorithm::fedavg_central;
    if (s == "local-only") return Algorithm::local_only;
    throw std::invalid_argument("unknown algorithm '" + s + "'");
}

std::string to_string(ExecMode m) {
    return m == ExecMode::serial ? "serial" : "openmp";
}

ExecMode exec_mode_from_string(const std::string& s) {
    if (s == "serial") return ExecMode::serial;
    if (s == "openmp") return ExecMode::openmp;
    throw std::invalid_argument("unknown exec mode '" + s + "'");
}

void DatasetSource::validate() const {
    if (type == Type::synthetic) {
        if (synthetic.num_classes < 2) {
            throw std::invalid_argument("dataset.num_classes: must be >= 2");
        }
        if (synthetic.per_class < 2) throw std::invalid_argument("dataset.per_class: must be >= 2");
        if (synthetic.dim < synthetic.num_classes) {
            throw std::invalid_argument("dataset.dim: must be >= num_classes");
        }
        if (!(synthetic.separation > 0.0)) {
            throw std::invalid_argument("dataset.separation: must be > 0");
        }
    } else if (csv_path.empty()) {
        throw std::invalid_argument("dataset.path: csv source needs a path");
    }
}

std::uint64_t train_seed(std::uint64_t master_seed, int node, int round) {
    return derive_seed(master_seed, kSeedTrain, static_cast<std::uint64_t>(node),
                       static_cast<std::uint64_t>(round));
}

void SimConfig::validate() const {
    if (rounds < 0) throw std::invalid_argument("rounds: must be >= 0");
    if (model_kind == ModelKind::mlp_1hidden && hidden_dim < 1) {
        throw std::invalid_argument("hidden_dim: must be positive for mlp-1hidden");
    }
    game.validate();
    train.validate();
    topology.validate();
    partition.validate();
    dataset.validate();
}

namespace {

// Runs f(node) for every node, either through the OpenMP loop or the serial
// reference loop. Exceptions are rethrown for the lowest node index so the
// surfaced error does not depend on thread schedule.
template <typename F>
void for_each_node(ExecMode mode, int k, F&& f) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k));
    if (mode == ExecMode::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < k; ++i) {
            try {
                f(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
        for (int i = 0; i < k; ++i) {
            try {
                f(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

Dataset build_dataset(const SimConfig& cfg) {
    if (cfg.dataset.type == DatasetSource::Type::synthetic) {
        const auto& s = cfg.dataset.synthetic;
        return generate_synthetic(s.num_classes, s.dim, s.per_class, s.separation,
                                  derive_seed(cfg.master_seed, kSeedData));
    }
    return cfg.dataset.csv_num_classes > 0
               ? load_csv(cfg.dataset.csv_path, cfg.dataset.csv_num_classes)
               : load_csv(cfg.dataset.csv_path);
}

}  // namespace

SimState setup_state(const SimConfig& cfg) {
    cfg.validate();
    const Dataset data = build_dataset(cfg);

    SimState state;
    state.data = partition(data, cfg.partition, derive_seed(cfg.master_seed, kSeedPartition));

    ModelSpec spec;
    spec.kind = cfg.model_kind;
    spec.input_dim = data.dim;
    spec.hidden_dim = cfg.hidden_dim;
    spec.num_classes = data.num_classes;
    spec.validate();

    state.models.reserve(state.data.size());
    state.histograms.reserve(state.data.size());
    for (std::size_t i = 0; i < state.data.size(); ++i) {
        state.models.push_back(
            init_model(spec, derive_seed(cfg.master_seed, kSeedInit, i)));
        state.histograms.push_back(shard_histogram(state.data[i]));
    }
    return state;
}

RoundMetrics run_round(SimState& state, int t, const SimConfig& cfg,
                       SimulationResult* artifacts) {
    const int k = state.num_nodes();
    if (k < 1) throw std::invalid_argument("run_round: no nodes");

    // Phase 1: local training, continuing from each node's current model.
    for_each_node(cfg.exec, k, [&](int i) {
        TrainConfig tc = cfg.train;
        tc.seed = train_seed(cfg.master_seed, i, t);
        state.models[static_cast<std::size_t>(i)] =
            train_local(state.models[static_cast<std::size_t>(i)],
                        state.data[static_cast<std::size_t>(i)].train, tc);
    });

    std::vector<NodeMetrics> per_node(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) per_node[static_cast<std::size_t>(i)].node = i;

    std::vector<std::vector<TraceEntry>> traces(static_cast<std::size_t>(k));

    if (cfg.algorithm == Algorithm::pfedgame) {
        // Phase 2: immutable snapshot of all post-training models.
        std::map<int, Model> snapshot;
        for (int i = 0; i < k; ++i) snapshot.emplace(i, state.models[static_cast<std::size_t>(i)]);

        // Phase 3: this round's graph.
        const Adjacency adj = adjacency_at(cfg.topology, k, t, state.histograms);
        if (artifacts) artifacts->adjacency_log.push_back(adj);

        // Phase 4+5: select, play the game, replace the node model.
        for_each_node(cfg.exec, k, [&](int i) {
            auto& nm = per_node[static_cast<std::size_t>(i)];
            const auto& nd = state.data[static_cast<std::size_t>(i)];
            const PeerSet cx =
                peer_selection(i, neighbors(adj, i), snapshot, nd.test, cfg.game.theta);
            if (cx.members.empty()) {
                nm.skipped = true;  // keep M(x); nothing reached theta
                return;
            }
            GameState gs = pfedgame_aggregate(i, cx, snapshot, nd, cfg.game);
            nm.peer_count = static_cast<int>(cx.size());
            nm.psi_x = gs.psi_x;
            traces[static_cast<std::size_t>(i)] = std::move(gs.trace);
            state.models[static_cast<std::size_t>(i)] = std::move(gs.gamma);
        });

        for (int i = 0; i < k; ++i) {
            if (per_node[static_cast<std::size_t>(i)].skipped) {
                log_info("round " + std::to_string(t) + " node " + std::to_string(i) +
                         ": no-aggregation (empty peer set)");
            }
        }
    } else if (cfg.algorithm == Algorithm::fedavg_central) {
        std::map<int, Model> snapshot;
        std::map<int, std::int64_t> sizes;
        for (int i = 0; i < k; ++i) {
            snapshot.emplace(i, state.models[static_cast<std::size_t>(i)]);
            sizes.emplace(i, static_cast<std::int64_t>(
                                 state.data[static_cast<std::size_t>(i)].train.n()));
        }
        const Model global = fedavg_baseline_round(snapshot, sizes);
        for (int i = 0; i < k; ++i) {
            state.models[static_cast<std::size_t>(i)] = global;
            per_node[static_cast<std::size_t>(i)].peer_count = k;
        }
    }
    // local-only: phases 2-4 are no-ops

    if (artifacts && cfg.algorithm == Algorithm::pfedgame) {
        for (int i = 0; i < k; ++i) {
            if (!traces[static_cast<std::size_t>(i)].empty()) {
                artifacts->game_traces.push_back(
                    {t, i, std::move(traces[static_cast<std::size_t>(i)])});
            }
        }
    }

    // Metrics on the local test shards, after replacement.
    for_each_node(cfg.exec, k, [&](int i) {
        auto& nm = per_node[static_cast<std::size_t>(i)];
        nm.accuracy = evaluate_accuracy(state.models[static_cast<std::size_t>(i)],
                                        state.data[static_cast<std::size_t>(i)].test);
    });

    RoundMetrics rm;
    rm.fl_round = t;
    rm.per_node = std::move(per_node);
    double sum = 0.0;
    for (const auto& nm : rm.per_node) sum += nm.accuracy;
    rm.mean_accuracy = sum / double(k);
    return rm;
}

SimulationResult run_simulation(const SimConfig& cfg) {
    cfg.validate();
    SimState state = setup_state(cfg);

    SimulationResult result;
    result.rounds.reserve(static_cast<std::size_t>(cfg.rounds));
    for (int t = 0; t < cfg.rounds; ++t) {
        result.rounds.push_back(run_round(state, t, cfg, &result));
        log_debug("round " + std::to_string(t) + " mean accuracy " +
                  std::to_string(result.rounds.back().mean_accuracy));
    }
    result.final_models = std::move(state.models);
    return result;
}

RepeatSummary repeat_and_average(const SimConfig& cfg, int n_repeats) {
    if (n_repeats < 1) throw std::invalid_argument("repeat_and_average: n_repeats must be >= 1");
    RepeatSummary summary;
    summary.runs.reserve(static_cast<std::size_t>(n_repeats));
    for (int i = 0; i < n_repeats; ++i) {
        SimConfig run_cfg = cfg;
        run_cfg.master_seed = cfg.master_seed + static_cast<std::uint64_t>(i);
        run_cfg.topology.seed = cfg.topology.seed + static_cast<std::uint64_t>(i);
        summary.runs.push_back(run_simulation(run_cfg));
    }

    const std::size_t t_max = summary.runs.front().rounds.size();
    summary.round_mean.resize(t_max, 0.0);
    summary.round_std.resize(t_max, 0.0);
    for (std::size_t t = 0; t < t_max; ++t) {
        double mean = 0.0;
        for (const auto& run : summary.runs) mean += run.rounds[t].mean_accuracy;
        mean /= double(n_repeats);
        double var = 0.0;
        for (const auto& run : summary.runs) {
            const double d = run.rounds[t].mean_accuracy - mean;
            var += d * d;
        }
        summary.round_mean[t] = mean;
        summary.round_std[t] = std::sqrt(var / double(n_repeats));
    }
    return summary;
}

}  // namespace pfedgame
