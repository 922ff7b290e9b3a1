#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pfedgame/simulator.hpp"

namespace pfedgame {

/// Runs `cfg` (repeated `repeats` times) and writes metrics CSV(s),
/// summary.json, topology/trace exports and final checkpoints under
/// `output_dir`. File contents are assembled in memory first, so a failing
/// path produces no partial CSV.
int run_command(const SimConfig& cfg, int repeats, const std::string& output_dir,
                std::ostream& out);

/// Loads the config files, requires them to differ only in algorithm or
/// partition, runs each and prints a per-algorithm x per-regime table of
/// final mean accuracy (also written as CSV).
int compare_command(const std::vector<std::string>& config_paths, int repeats,
                    const std::string& output_dir, std::ostream& out);

std::string default_output_dir(const std::string& tag);

/// Full command-line entry point (subcommands `run` and `compare`).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace pfedgame
