#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pfedgame/cli.hpp"
#include "pfedgame/config.hpp"

using namespace pfedgame;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::vector<const char*> argv = {"pfedgame"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

// tiny config so CLI tests stay fast
std::string write_small_config(const std::string& name, const std::string& algorithm,
                               const std::string& partition_extra = "") {
    const std::string path = "/tmp/pfg_cli_" + name;
    std::ofstream os(path);
    os << R"({
  "rounds": 2,
  "algorithm": ")" << algorithm << R"(",
  "master_seed": 5,
  "train": {"epochs": 1, "learning_rate": 0.1, "batch_size": 16},
  "dataset": {"type": "synthetic", "num_classes": 4, "dim": 6, "per_class": 20, "separation": 4.0},
  "partition": {"mode": "extreme", "k": 2)" << partition_extra << R"(}
})";
    return path;
}

std::size_t count_lines(const std::string& path) {
    std::ifstream is(path);
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) ++n;
    return n;
}

}  // namespace

TEST_CASE("help lists every documented flag") {
    std::string help;
    run_cli({"run", "--help"}, &help);
    for (const char* flag :
         {"--preset", "--config", "--seed", "--rounds", "--repeats", "--theta", "--beta",
          "--delta", "--game-rounds", "--algorithm", "--partition", "--nodes", "--topology",
          "--dataset", "--model", "--hidden-dim", "--exec", "--output", "--early-exit-game"}) {
        INFO(flag);
        CHECK(help.find(flag) != std::string::npos);
    }
}

TEST_CASE("run writes a metrics csv with T*k data rows plus header") {
    const auto cfg_path = write_small_config("run.json", "pfedgame");
    const std::string out_dir = "/tmp/pfg_cli_out_run";
    fs::remove_all(out_dir);
    std::string text;
    const int code = run_cli({"run", "--config", cfg_path, "--output", out_dir}, &text);
    CHECK(code == 0);
    CHECK(count_lines(out_dir + "/metrics.csv") == 1 + 2 * 2);  // header + T*k
    CHECK(fs::exists(out_dir + "/summary.json"));
    CHECK(fs::exists(out_dir + "/trace.csv"));
    CHECK(fs::exists(out_dir + "/topology.csv"));
    CHECK(fs::exists(out_dir + "/checkpoints/node_0.params"));
    CHECK(fs::exists(out_dir + "/checkpoints/node_1.params"));
    CHECK(text.find("final mean accuracy") != std::string::npos);
}

TEST_CASE("run with repeats emits per-repeat csvs and per-round mean/std") {
    const auto cfg_path = write_small_config("rep.json", "local-only");
    const std::string out_dir = "/tmp/pfg_cli_out_rep";
    fs::remove_all(out_dir);
    const int code = run_cli({"run", "--config", cfg_path, "--output", out_dir, "--repeats", "2"});
    CHECK(code == 0);
    CHECK(fs::exists(out_dir + "/metrics_rep0.csv"));
    CHECK(fs::exists(out_dir + "/metrics_rep1.csv"));

    std::ifstream is(out_dir + "/summary.json");
    nlohmann::json j;
    is >> j;
    CHECK(j["repeats"] == 2);
    REQUIRE(j["per_round"].size() == 2);
    CHECK(j["per_round"][0].contains("mean_acc"));
    CHECK(j["per_round"][0].contains("std_acc"));
    CHECK(j.contains("wall_time_sec"));
}

TEST_CASE("unwritable output path exits nonzero with no partial csv") {
    const auto cfg_path = write_small_config("unwritable.json", "local-only");
    const std::string blocker = "/tmp/pfg_cli_blocker";
    std::ofstream(blocker) << "file, not a directory";
    std::string err;
    const int code =
        run_cli({"run", "--config", cfg_path, "--output", blocker + "/sub"}, nullptr, &err);
    CHECK(code != 0);
    CHECK_FALSE(err.empty());
    CHECK_FALSE(fs::exists(blocker + "/sub/metrics.csv"));
}

TEST_CASE("missing dataset source fails before any computation") {
    std::string err;
    const int code = run_cli({"run"}, nullptr, &err);
    CHECK(code != 0);
    CHECK(err.find("dataset") != std::string::npos);
}

TEST_CASE("flag constraint violations exit nonzero") {
    std::string err;
    const int code =
        run_cli({"run", "--preset", "extreme-synthetic", "--delta", "0.2", "--game-rounds", "10"},
                nullptr, &err);
    CHECK(code != 0);
    CHECK(err.find("delta") != std::string::npos);
}

TEST_CASE("compare tabulates algorithms by partition regime") {
    const auto a = write_small_config("cmp_a.json", "pfedgame");
    const auto b = write_small_config("cmp_b.json", "local-only");
    const std::string out_dir = "/tmp/pfg_cli_out_cmp";
    fs::remove_all(out_dir);
    std::string text;
    const int code = run_cli({"compare", a, b, "--output", out_dir}, &text);
    CHECK(code == 0);
    CHECK(text.find("pfedgame") != std::string::npos);
    CHECK(text.find("local-only") != std::string::npos);
    CHECK(text.find("extreme") != std::string::npos);
    CHECK(fs::exists(out_dir + "/compare.csv"));
    CHECK(count_lines(out_dir + "/compare.csv") == 3);  // header + 2 cells
}

TEST_CASE("compare builds one row across heterogeneity regimes") {
    const auto ex = write_small_config("row_ex.json", "pfedgame");
    // severe and homogeneous variants of the same config
    const std::string severe = "/tmp/pfg_cli_row_severe.json";
    const std::string homog = "/tmp/pfg_cli_row_homog.json";
    for (const auto& [path, mode] :
         {std::pair{severe, "severe"}, std::pair{homog, "homogeneous"}}) {
        std::ofstream os(path);
        os << R"({
  "rounds": 2, "algorithm": "pfedgame", "master_seed": 5,
  "train": {"epochs": 1, "learning_rate": 0.1, "batch_size": 16},
  "dataset": {"type": "synthetic", "num_classes": 4, "dim": 6, "per_class": 20, "separation": 4.0},
  "partition": {"mode": ")" << mode
           << R"(", "k": 4}
})";
    }
    const std::string out_dir = "/tmp/pfg_cli_out_row";
    fs::remove_all(out_dir);
    std::string text;
    const int code = run_cli({"compare", ex, severe, homog, "--output", out_dir}, &text);
    CHECK(code == 0);
    CHECK(count_lines(out_dir + "/compare.csv") == 4);  // header + 3 cells
    CHECK(text.find("severe") != std::string::npos);
    CHECK(text.find("homogeneous") != std::string::npos);
}

TEST_CASE("compare rejects mismatched configs and short lists") {
    const auto a = write_small_config("cmp_c.json", "pfedgame");
    const std::string other = "/tmp/pfg_cli_cmp_d.json";
    {
        std::ofstream os(other);
        os << R"({
  "rounds": 2, "algorithm": "local-only", "master_seed": 777,
  "train": {"epochs": 1, "learning_rate": 0.1, "batch_size": 16},
  "dataset": {"type": "synthetic", "num_classes": 4, "dim": 6, "per_class": 20, "separation": 4.0},
  "partition": {"mode": "extreme", "k": 2}
})";
    }
    std::string err;
    CHECK(run_cli({"compare", a, other, "--output", "/tmp/pfg_cli_out_cmp_bad"}, nullptr, &err) !=
          0);
    CHECK(err.find("master_seed") != std::string::npos);

    CHECK(run_cli({"compare", a}, nullptr, &err) != 0);
}

TEST_CASE("unknown subcommand or no subcommand is an error") {
    std::string err;
    CHECK(run_cli({}, nullptr, &err) != 0);
    CHECK(run_cli({"frobnicate"}, nullptr, &err) != 0);
}
