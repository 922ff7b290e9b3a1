#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfedgame/simulator.hpp"

namespace pfedgame {

nlohmann::json config_to_json(const SimConfig& cfg);

/// Strict: unknown keys, type errors and constraint violations are reported
/// with the offending field path.
SimConfig config_from_json(const nlohmann::json& j);

SimConfig load_config_file(const std::string& path);

const std::vector<std::string>& preset_names();

/// Presets pin the heterogeneity regimes (k = 5/10/10 for
/// extreme/severe/homogeneous) and the game at r = 10, delta = 0.1 on the
/// synthetic 10-class dataset. dynamic-rewire swaps in the rewiring topology.
SimConfig expand_preset(const std::string& name);

/// Command-line values that override preset/file settings.
struct FlagOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> rounds;
    std::optional<double> theta;
    std::optional<double> beta;
    std::optional<double> delta;
    std::optional<int> game_rounds;
    std::optional<bool> early_exit_game;
    std::optional<std::string> algorithm;
    std::optional<std::string> partition_mode;
    std::optional<int> nodes;
    std::optional<std::string> topology_kind;
    std::optional<std::string> dataset_csv;
    std::optional<std::string> model_kind;
    std::optional<std::size_t> hidden_dim;
    std::optional<std::string> exec;
};

/// Assembles a validated SimConfig. Precedence, lowest to highest:
/// built-in defaults, preset expansion, config file, flags.
SimConfig parse_config(const std::optional<std::string>& config_path,
                       const std::optional<std::string>& preset, const FlagOverrides& flags);

/// Throws unless the configs differ only in algorithm and/or partition.
void check_comparable(const std::vector<SimConfig>& cfgs);

}  // namespace pfedgame
