#include "pfedgame/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "pfedgame/config.hpp"
#include "pfedgame/log.hpp"
#include "pfedgame/run_io.hpp"
#include "pfedgame/util.hpp"

namespace pfedgame {

namespace fs = std::filesystem;

std::string default_output_dir(const std::string& tag) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_buf{};
    localtime_r(&now, &tm_buf);
    std::ostringstream os;
    os << "out/" << std::put_time(&tm_buf, "%Y%m%d-%H%M%S") << "-" << tag;
    return os.str();
}

int run_command(const SimConfig& cfg, int repeats, const std::string& output_dir,
                std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const RepeatSummary summary = repeat_and_average(cfg, repeats);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // Assemble every file before touching the filesystem.
    std::vector<std::pair<std::string, std::string>> files;
    if (repeats == 1) {
        files.emplace_back("metrics.csv", metrics_csv(summary.runs[0]));
    } else {
        for (std::size_t i = 0; i < summary.runs.size(); ++i) {
            files.emplace_back("metrics_rep" + std::to_string(i) + ".csv",
                               metrics_csv(summary.runs[i]));
        }
    }
    if (cfg.algorithm == Algorithm::pfedgame) {
        files.emplace_back("trace.csv", trace_csv(summary.runs[0]));
        files.emplace_back("topology.csv", topology_csv(summary.runs[0]));
    }
    files.emplace_back("summary.json", summary_json(cfg, repeats, summary, wall).dump(2) + "\n");

    fs::create_directories(output_dir);
    for (const auto& [name, content] : files) {
        write_text_file(output_dir + "/" + name, content);
    }
    write_checkpoints(output_dir + "/checkpoints", summary.runs[0]);

    const double final_acc = summary.round_mean.empty() ? 0.0 : summary.round_mean.back();
    out << "algorithm=" << to_string(cfg.algorithm)
        << " partition=" << to_string(cfg.partition.mode) << " rounds=" << cfg.rounds
        << " repeats=" << repeats << "\n";
    out << "final mean accuracy: " << format_double(final_acc) << "\n";
    out << "output: " << output_dir << "\n";
    return 0;
}

int compare_command(const std::vector<std::string>& config_paths, int repeats,
                    const std::string& output_dir, std::ostream& out) {
    if (config_paths.size() < 2) {
        throw std::runtime_error("compare: need at least 2 config files");
    }
    std::vector<SimConfig> cfgs;
    cfgs.reserve(config_paths.size());
    for (const auto& p : config_paths) cfgs.push_back(load_config_file(p));
    check_comparable(cfgs);

    std::vector<std::string> algorithms;  // row order, first seen
    std::vector<std::string> partitions;  // column order, first seen
    std::map<std::pair<std::string, std::string>, double> cells;
    for (const auto& cfg : cfgs) {
        const std::string alg = to_string(cfg.algorithm);
        const std::string part = to_string(cfg.partition.mode);
        if (cells.count({alg, part})) {
            throw std::runtime_error("compare: duplicate cell " + alg + "/" + part);
        }
        const RepeatSummary summary = repeat_and_average(cfg, repeats);
        cells[{alg, part}] = summary.round_mean.empty() ? 0.0 : summary.round_mean.back();
        if (std::find(algorithms.begin(), algorithms.end(), alg) == algorithms.end()) {
            algorithms.push_back(alg);
        }
        if (std::find(partitions.begin(), partitions.end(), part) == partitions.end()) {
            partitions.push_back(part);
        }
    }

    std::size_t w = 12;
    for (const auto& a : algorithms) w = std::max(w, a.size() + 2);
    out << std::left << std::setw(static_cast<int>(w)) << "algorithm";
    for (const auto& p : partitions) out << std::setw(14) << p;
    out << "\n";
    std::string csv = "algorithm,partition,final_mean_acc\n";
    for (const auto& a : algorithms) {
        out << std::setw(static_cast<int>(w)) << a;
        for (const auto& p : partitions) {
            auto it = cells.find({a, p});
            if (it == cells.end()) {
                out << std::setw(14) << "-";
            } else {
                std::ostringstream cell;
                cell << std::fixed << std::setprecision(4) << it->second;
                out << std::setw(14) << cell.str();
                csv += a + "," + p + "," + format_double(it->second) + "\n";
            }
        }
        out << "\n";
    }

    fs::create_directories(output_dir);
    write_text_file(output_dir + "/compare.csv", csv);
    out << "output: " << output_dir << "/compare.csv\n";
    return 0;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    set_log_level_from_env();

    CLI::App app{"pFedGame: decentralized federated learning simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a simulation and write metrics");
    std::string preset, config_path, algorithm, partition_mode, topology_kind, dataset_csv;
    std::string model_kind, exec_mode, output_dir;
    std::uint64_t seed = 0;
    int rounds = 0, repeats = 1, game_rounds = 0, nodes = 0;
    double theta = 0.0, beta = 0.0, delta = 0.0;
    std::size_t hidden_dim = 0;
    bool early_exit = false;

    run->add_option("--preset", preset, "Experiment preset: " + [] {
        std::string s;
        for (const auto& n : preset_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }());
    run->add_option("--config", config_path, "JSON config file (overrides preset)");
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--rounds", rounds, "Number of FL rounds (T)");
    run->add_option("--repeats", repeats, "Independent repeats, seeds master_seed+i")
        ->check(CLI::PositiveNumber);
    run->add_option("--theta", theta, "Peer-selection accuracy threshold in [0,1]");
    run->add_option("--beta", beta, "Minimum significant accuracy difference (>= 0)");
    run->add_option("--delta", delta, "Utility step per game round, in (0,1]");
    run->add_option("--game-rounds", game_rounds, "Game rounds r (delta*r <= 1)");
    run->add_option("--algorithm", algorithm, "pfedgame | fedavg-central | local-only");
    run->add_option("--partition", partition_mode, "extreme | severe | modest | homogeneous");
    run->add_option("--nodes", nodes, "Participant count k (defaults per partition mode)");
    run->add_option("--topology", topology_kind,
                    "static-complete | static-random | rewire-per-round | similarity-threshold");
    run->add_option("--dataset", dataset_csv, "CSV dataset path (switches source to csv)");
    run->add_option("--model", model_kind, "softmax-regression | mlp-1hidden");
    run->add_option("--hidden-dim", hidden_dim, "Hidden width for mlp-1hidden");
    run->add_option("--exec", exec_mode, "serial | openmp");
    run->add_option("--output", output_dir, "Output directory (default out/<timestamp>-<tag>)");
    run->add_flag("--early-exit-game", early_exit, "Stop the game at the first rejected step");

    auto* cmp = app.add_subcommand("compare", "Run configs differing only in algorithm/partition");
    std::vector<std::string> cmp_paths;
    int cmp_repeats = 1;
    std::string cmp_output;
    cmp->add_option("configs", cmp_paths, "Two or more JSON config files")->required();
    cmp->add_option("--repeats", cmp_repeats, "Independent repeats per config")
        ->check(CLI::PositiveNumber);
    cmp->add_option("--output", cmp_output, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (run->parsed()) {
            FlagOverrides flags;
            if (run->count("--seed")) flags.seed = seed;
            if (run->count("--rounds")) flags.rounds = rounds;
            if (run->count("--theta")) flags.theta = theta;
            if (run->count("--beta")) flags.beta = beta;
            if (run->count("--delta")) flags.delta = delta;
            if (run->count("--game-rounds")) flags.game_rounds = game_rounds;
            if (run->count("--early-exit-game")) flags.early_exit_game = early_exit;
            if (run->count("--algorithm")) flags.algorithm = algorithm;
            if (run->count("--partition")) flags.partition_mode = partition_mode;
            if (run->count("--nodes")) flags.nodes = nodes;
            if (run->count("--topology")) flags.topology_kind = topology_kind;
            if (run->count("--dataset")) flags.dataset_csv = dataset_csv;
            if (run->count("--model")) flags.model_kind = model_kind;
            if (run->count("--hidden-dim")) flags.hidden_dim = hidden_dim;
            if (run->count("--exec")) flags.exec = exec_mode;

            if (preset.empty() && config_path.empty() && !flags.dataset_csv) {
                throw std::runtime_error(
                    "missing dataset source: specify --preset, --config, or --dataset");
            }
            const SimConfig cfg = parse_config(
                config_path.empty() ? std::nullopt : std::make_optional(config_path),
                preset.empty() ? std::nullopt : std::make_optional(preset), flags);
            if (output_dir.empty()) {
                output_dir = default_output_dir(preset.empty() ? "run" : preset);
            }
            return run_command(cfg, repeats, output_dir, out);
        }
        if (cmp->parsed()) {
            if (cmp_output.empty()) cmp_output = default_output_dir("compare");
            return compare_command(cmp_paths, cmp_repeats, cmp_output, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cli_main(int argc, const char* const* argv) {
    return cli_main(argc, argv, std::cout, std::cerr);
}

}  // namespace pfedgame
