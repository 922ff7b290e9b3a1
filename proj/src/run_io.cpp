#include "pfedgame/run_io.hpp"

#include <filesystem>
#include <fstream>

#include "pfedgame/config.hpp"
#include "pfedgame/util.hpp"

namespace pfedgame {

std::string metrics_csv(const SimulationResult& result) {
    std::string out = "fl_round,node,acc,peers,psi_x,skipped\n";
    for (const auto& round : result.rounds) {
        for (const auto& nm : round.per_node) {
            out += std::to_string(round.fl_round);
            out += ',';
            out += std::to_string(nm.node);
            out += ',';
            out += format_double(nm.accuracy);
            out += ',';
            out += std::to_string(nm.peer_count);
            out += ',';
            out += format_double(nm.psi_x);
            out += ',';
            out += nm.skipped ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

std::string trace_csv(const SimulationResult& result) {
    std::string out = "fl_round,node,game_round,psi_x,candidate_acc,accepted\n";
    for (const auto& nt : result.game_traces) {
        for (const auto& e : nt.trace) {
            out += std::to_string(nt.fl_round);
            out += ',';
            out += std::to_string(nt.node);
            out += ',';
            out += std::to_string(e.game_round);
            out += ',';
            out += format_double(e.psi_x);
            out += ',';
            out += format_double(e.candidate_acc);
            out += ',';
            out += e.accepted ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

std::string topology_csv(const SimulationResult& result) {
    std::string out = "t,node_a,node_b,weight\n";
    for (std::size_t t = 0; t < result.adjacency_log.size(); ++t) {
        out += edge_list_lines(static_cast<int>(t), result.adjacency_log[t]);
    }
    return out;
}

nlohmann::json summary_json(const SimConfig& cfg, int repeats, const RepeatSummary& summary,
                            double wall_time_sec) {
    nlohmann::json j;
    j["config"] = config_to_json(cfg);
    j["repeats"] = repeats;
    nlohmann::json rounds = nlohmann::json::array();
    for (std::size_t t = 0; t < summary.round_mean.size(); ++t) {
        rounds.push_back({{"round", t},
                          {"mean_acc", summary.round_mean[t]},
                          {"std_acc", summary.round_std[t]}});
    }
    j["per_round"] = rounds;
    j["final_mean_acc"] = summary.round_mean.empty() ? 0.0 : summary.round_mean.back();
    j["wall_time_sec"] = wall_time_sec;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed: " + path);
}

void write_checkpoints(const std::string& dir, const SimulationResult& result) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < result.final_models.size(); ++i) {
        save_param_vector(dir + "/node_" + std::to_string(i) + ".params",
                          result.final_models[i].params);
    }
}

}  // namespace pfedgame
