#include "pfedgame/game.hpp"

#include <cmath>
#include <stdexcept>

namespace pfedgame {

void GameConfig::validate() const {
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("game.theta: must be in [0,1]");
    if (beta < 0.0) throw std::invalid_argument("game.beta: must be >= 0");
    if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("game.delta: must be in (0,1]");
    if (rounds < 1) throw std::invalid_argument("game.rounds: must be >= 1");
    if (delta * double(rounds) > 1.0 + 1e-9) {
        throw std::invalid_argument("game: delta*rounds must be <= 1 (got " +
                                    std::to_string(delta * double(rounds)) + ")");
    }
}

PlayResult pfedgame_play(const std::function<double(int)>& acc_at, const GameConfig& cfg) {
    cfg.validate();
    PlayResult res;
    int k = 0;
    double current = acc_at(0);
    ++res.eval_count;
    res.initial_acc = current;

    for (int round = 1; round <= cfg.rounds; ++round) {
        const double candidate = acc_at(k + 1);
        ++res.eval_count;
        const bool significant = std::abs(current - candidate) >= cfg.beta;
        const bool accepted = significant && current <= candidate;
        if (accepted) {
            ++k;
            current = candidate;
        }
        res.steps.push_back({round, k, candidate, accepted});
        if (!accepted && cfg.early_exit) break;
    }
    res.accepted_steps = k;
    res.final_acc = current;
    return res;
}

PeerSet peer_selection(int x, const std::set<int>& candidates,
                       const std::map<int, Model>& models, const Dataset& test_data,
                       double theta) {
    if (candidates.count(x) > 0) {
        throw std::invalid_argument("peer_selection: candidate set must not contain x");
    }
    if (test_data.n() == 0) throw std::invalid_argument("peer_selection: empty dataset");

    PeerSet out;
    auto consider = [&](int id) {
        auto it = models.find(id);
        if (it == models.end()) {
            throw std::invalid_argument("peer_selection: no model for node " + std::to_string(id));
        }
        const double acc = evaluate_accuracy(it->second, test_data);
        ++out.accuracy_evals;
        if (acc >= theta) out.members.insert(id);
    };
    for (int c : candidates) consider(c);
    consider(x);  // the self-model competes on equal terms
    return out;
}

GameState pfedgame_aggregate(int x, const PeerSet& peers, const std::map<int, Model>& models,
                             const NodeData& dx, const GameConfig& cfg) {
    cfg.validate();
    if (peers.members.empty()) {
        throw std::invalid_argument("pfedgame_aggregate: peer set must be non-empty");
    }
    if (dx.test.n() == 0) throw std::invalid_argument("pfedgame_aggregate: empty test data");

    auto model_of = [&](int id) -> const Model& {
        auto it = models.find(id);
        if (it == models.end()) {
            throw std::invalid_argument("pfedgame_aggregate: no model for node " +
                                        std::to_string(id));
        }
        return it->second;
    };

    // M(alpha): uniform aggregate over the selected peers.
    std::vector<Model> peer_models;
    peer_models.reserve(peers.members.size());
    for (int id : peers.members) peer_models.push_back(model_of(id));
    const std::vector<double> uniform(peer_models.size(), 1.0 / double(peer_models.size()));
    const Model m_alpha = aggregate(peer_models, uniform);

    // Player one is always M(x), selected or not.
    const Model& m_x = model_of(x);

    const std::vector<Model> players = {m_x, m_alpha};
    std::map<int, Model> mixtures;
    // k*delta <= 1 mathematically; the min() only absorbs the last-ulp case
    // where delta rounded up (e.g. delta = 1/7) so 1 - psi never goes negative.
    auto psi_at = [&](int k) { return std::min(1.0, double(k) * cfg.delta); };
    auto acc_at = [&](int k) {
        const double psi = psi_at(k);
        Model mix = aggregate(players, {psi, 1.0 - psi});
        const double acc = evaluate_accuracy(mix, dx.test);
        mixtures.insert_or_assign(k, std::move(mix));
        return acc;
    };

    const PlayResult play = pfedgame_play(acc_at, cfg);

    GameState state;
    state.accepted_steps = play.accepted_steps;
    state.psi_x = psi_at(play.accepted_steps);
    state.psi_alpha = 1.0 - state.psi_x;
    state.gamma = mixtures.at(play.accepted_steps);
    state.initial_acc = play.initial_acc;
    state.final_acc = play.final_acc;
    state.accuracy_evals = play.eval_count;
    state.trace.reserve(play.steps.size());
    for (const PlayStep& s : play.steps) {
        state.trace.push_back({s.game_round, psi_at(s.psi_steps), s.candidate_acc, s.accepted});
    }
    return state;
}

Model fedavg_baseline_round(const std::map<int, Model>& models,
                            const std::map<int, std::int64_t>& train_sizes) {
    if (models.empty()) throw std::invalid_argument("fedavg_baseline_round: no models");
    std::vector<Model> ms;
    std::vector<std::int64_t> sizes;
    ms.reserve(models.size());
    for (const auto& [id, m] : models) {
        auto it = train_sizes.find(id);
        if (it == train_sizes.end()) {
            throw std::invalid_argument("fedavg_baseline_round: no train size for node " +
                                        std::to_string(id));
        }
        ms.push_back(m);
        sizes.push_back(it->second);
    }
    return aggregate(ms, fedavg_weights(sizes));
}

Model local_only_baseline(const Model& model, const NodeData& dx, const TrainConfig& cfg) {
    return train_local(model, dx.train, cfg);
}

}  // namespace pfedgame
