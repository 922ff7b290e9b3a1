#pragma once

#include <string>

#include <json.hpp>

#include "pfedgame/simulator.hpp"

namespace pfedgame {

/// `fl_round,node,acc,peers,psi_x,skipped`, one data row per (round, node).
/// Doubles print as shortest round-trip decimals, so equal runs produce
/// byte-identical output.
std::string metrics_csv(const SimulationResult& result);

/// `fl_round,node,game_round,psi_x,candidate_acc,accepted`
std::string trace_csv(const SimulationResult& result);

/// `t,node_a,node_b,weight`
std::string topology_csv(const SimulationResult& result);

nlohmann::json summary_json(const SimConfig& cfg, int repeats, const RepeatSummary& summary,
                            double wall_time_sec);

void write_text_file(const std::string& path, const std::string& content);

/// Final per-node model checkpoints under <dir>/node_<id>.params.
void write_checkpoints(const std::string& dir, const SimulationResult& result);

}  // namespace pfedgame
