#include "pfedgame/config.hpp"

#include <fstream>
#include <functional>
#include <stdexcept>

namespace pfedgame {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("config error: " + path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) fail(path + "." + key, "unknown key");
    }
}

template <typename T>
void read_field(const json& j, const std::string& path, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(path + "." + key, "wrong type");
    }
}

void read_enum(const json& j, const std::string& path, const char* key,
               const std::function<void(const std::string&)>& apply) {
    if (!j.contains(key)) return;
    std::string s;
    read_field(j, path, key, s);
    try {
        apply(s);
    } catch (const std::exception& e) {
        fail(path + "." + key, e.what());
    }
}

}  // namespace

json config_to_json(const SimConfig& cfg) {
    json j;
    j["rounds"] = cfg.rounds;
    j["algorithm"] = to_string(cfg.algorithm);
    j["master_seed"] = cfg.master_seed;
    j["exec"] = to_string(cfg.exec);
    j["model"] = {{"kind", to_string(cfg.model_kind)}, {"hidden_dim", cfg.hidden_dim}};
    j["game"] = {{"theta", cfg.game.theta},
                 {"beta", cfg.game.beta},
                 {"delta", cfg.game.delta},
                 {"rounds", cfg.game.rounds},
                 {"early_exit", cfg.game.early_exit}};
    j["train"] = {{"epochs", cfg.train.epochs},
                  {"learning_rate", cfg.train.learning_rate},
                  {"batch_size", cfg.train.batch_size}};
    j["topology"] = {{"kind", to_string(cfg.topology.kind)},
                     {"edge_probability", cfg.topology.edge_probability},
                     {"rewire_fraction", cfg.topology.rewire_fraction},
                     {"similarity_threshold", cfg.topology.similarity_threshold},
                     {"seed", cfg.topology.seed}};
    j["partition"] = {{"mode", to_string(cfg.partition.mode)},
                      {"k", cfg.partition.k},
                      {"majority_fraction", cfg.partition.majority_fraction}};
    if (cfg.dataset.type == DatasetSource::Type::synthetic) {
        j["dataset"] = {{"type", "synthetic"},
                        {"num_classes", cfg.dataset.synthetic.num_classes},
                        {"dim", cfg.dataset.synthetic.dim},
                        {"per_class", cfg.dataset.synthetic.per_class},
                        {"separation", cfg.dataset.synthetic.separation}};
    } else {
        j["dataset"] = {{"type", "csv"},
                        {"path", cfg.dataset.csv_path},
                        {"num_classes", cfg.dataset.csv_num_classes}};
    }
    return j;
}

namespace {

void apply_json(const json& j, SimConfig& cfg) {
    check_keys(j, "config",
               {"rounds", "algorithm", "master_seed", "exec", "model", "game", "train",
                "topology", "partition", "dataset"});

    read_field(j, "config", "rounds", cfg.rounds);
    read_field(j, "config", "master_seed", cfg.master_seed);
    read_enum(j, "config", "algorithm",
              [&](const std::string& s) { cfg.algorithm = algorithm_from_string(s); });
    read_enum(j, "config", "exec",
              [&](const std::string& s) { cfg.exec = exec_mode_from_string(s); });

    if (j.contains("model")) {
        const auto& m = j.at("model");
        check_keys(m, "config.model", {"kind", "hidden_dim"});
        read_enum(m, "config.model", "kind",
                  [&](const std::string& s) { cfg.model_kind = model_kind_from_string(s); });
        read_field(m, "config.model", "hidden_dim", cfg.hidden_dim);
    }
    if (j.contains("game")) {
        const auto& g = j.at("game");
        check_keys(g, "config.game", {"theta", "beta", "delta", "rounds", "early_exit"});
        read_field(g, "config.game", "theta", cfg.game.theta);
        read_field(g, "config.game", "beta", cfg.game.beta);
        read_field(g, "config.game", "delta", cfg.game.delta);
        read_field(g, "config.game", "rounds", cfg.game.rounds);
        read_field(g, "config.game", "early_exit", cfg.game.early_exit);
    }
    if (j.contains("train")) {
        const auto& t = j.at("train");
        check_keys(t, "config.train", {"epochs", "learning_rate", "batch_size"});
        read_field(t, "config.train", "epochs", cfg.train.epochs);
        read_field(t, "config.train", "learning_rate", cfg.train.learning_rate);
        read_field(t, "config.train", "batch_size", cfg.train.batch_size);
    }
    if (j.contains("topology")) {
        const auto& t = j.at("topology");
        check_keys(t, "config.topology",
                   {"kind", "edge_probability", "rewire_fraction", "similarity_threshold",
                    "seed"});
        read_enum(t, "config.topology", "kind",
                  [&](const std::string& s) { cfg.topology.kind = schedule_kind_from_string(s); });
        read_field(t, "config.topology", "edge_probability", cfg.topology.edge_probability);
        read_field(t, "config.topology", "rewire_fraction", cfg.topology.rewire_fraction);
        read_field(t, "config.topology", "similarity_threshold",
                   cfg.topology.similarity_threshold);
        read_field(t, "config.topology", "seed", cfg.topology.seed);
    }
    if (j.contains("partition")) {
        const auto& p = j.at("partition");
        check_keys(p, "config.partition", {"mode", "k", "majority_fraction"});
        read_enum(p, "config.partition", "mode", [&](const std::string& s) {
            cfg.partition.mode = heterogeneity_mode_from_string(s);
            cfg.partition.k = default_k(cfg.partition.mode);
        });
        read_field(p, "config.partition", "k", cfg.partition.k);
        read_field(p, "config.partition", "majority_fraction", cfg.partition.majority_fraction);
    }
    if (j.contains("dataset")) {
        const auto& d = j.at("dataset");
        check_keys(d, "config.dataset",
                   {"type", "num_classes", "dim", "per_class", "separation", "path"});
        std::string type = cfg.dataset.type == DatasetSource::Type::csv ? "csv" : "synthetic";
        read_field(d, "config.dataset", "type", type);
        if (type == "synthetic") {
            cfg.dataset.type = DatasetSource::Type::synthetic;
            read_field(d, "config.dataset", "num_classes", cfg.dataset.synthetic.num_classes);
            read_field(d, "config.dataset", "dim", cfg.dataset.synthetic.dim);
            read_field(d, "config.dataset", "per_class", cfg.dataset.synthetic.per_class);
            read_field(d, "config.dataset", "separation", cfg.dataset.synthetic.separation);
        } else if (type == "csv") {
            cfg.dataset.type = DatasetSource::Type::csv;
            read_field(d, "config.dataset", "path", cfg.dataset.csv_path);
            read_field(d, "config.dataset", "num_classes", cfg.dataset.csv_num_classes);
        } else {
            fail("config.dataset.type", "must be 'synthetic' or 'csv'");
        }
    }
}

}  // namespace

SimConfig config_from_json(const json& j) {
    SimConfig cfg;
    apply_json(j, cfg);
    cfg.validate();
    return cfg;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw std::runtime_error("config error: " + path + ": " + e.what());
    }
    return config_from_json(j);
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "extreme-synthetic", "severe-synthetic", "homogeneous-synthetic", "modest-synthetic",
        "dynamic-rewire"};
    return names;
}

SimConfig expand_preset(const std::string& name) {
    SimConfig cfg;
    cfg.rounds = 20;
    cfg.algorithm = Algorithm::pfedgame;
    cfg.model_kind = ModelKind::softmax_regression;
    cfg.master_seed = 1;
    cfg.game = {0.5, 0.001, 0.1, 10, false};
    cfg.train.epochs = 2;
    cfg.train.learning_rate = 0.05;
    cfg.train.batch_size = 32;
    cfg.topology.kind = ScheduleKind::static_complete;
    cfg.dataset.type = DatasetSource::Type::synthetic;
    cfg.dataset.synthetic = {10, 20, 200, 4.0};

    if (name == "extreme-synthetic") {
        cfg.partition = {HeterogeneityMode::extreme, 5, 0.8};
    } else if (name == "severe-synthetic") {
        cfg.partition = {HeterogeneityMode::severe, 10, 0.8};
    } else if (name == "homogeneous-synthetic") {
        cfg.partition = {HeterogeneityMode::homogeneous, 10, 0.8};
    } else if (name == "modest-synthetic") {
        cfg.partition = {HeterogeneityMode::modest, 5, 0.8};
    } else if (name == "dynamic-rewire") {
        cfg.partition = {HeterogeneityMode::extreme, 5, 0.8};
        cfg.topology.kind = ScheduleKind::rewire_per_round;
        cfg.topology.edge_probability = 0.6;
        cfg.topology.rewire_fraction = 0.2;
    } else {
        throw std::runtime_error("unknown preset '" + name + "'");
    }
    cfg.validate();
    return cfg;
}

SimConfig parse_config(const std::optional<std::string>& config_path,
                       const std::optional<std::string>& preset, const FlagOverrides& flags) {
    SimConfig cfg;
    if (preset) cfg = expand_preset(*preset);
    if (config_path) {
        SimConfig base = cfg;
        std::ifstream is(*config_path);
        if (!is) throw std::runtime_error("cannot open config: " + *config_path);
        json j;
        try {
            j = json::parse(is);
        } catch (const json::exception& e) {
            throw std::runtime_error("config error: " + *config_path + ": " + e.what());
        }
        apply_json(j, base);
        cfg = base;
    }

    if (flags.seed) cfg.master_seed = *flags.seed;
    if (flags.rounds) cfg.rounds = *flags.rounds;
    if (flags.theta) cfg.game.theta = *flags.theta;
    if (flags.beta) cfg.game.beta = *flags.beta;
    if (flags.delta) cfg.game.delta = *flags.delta;
    if (flags.game_rounds) cfg.game.rounds = *flags.game_rounds;
    if (flags.early_exit_game) cfg.game.early_exit = *flags.early_exit_game;
    if (flags.algorithm) cfg.algorithm = algorithm_from_string(*flags.algorithm);
    if (flags.partition_mode) {
        cfg.partition.mode = heterogeneity_mode_from_string(*flags.partition_mode);
        cfg.partition.k = default_k(cfg.partition.mode);
    }
    if (flags.nodes) cfg.partition.k = *flags.nodes;
    if (flags.topology_kind) cfg.topology.kind = schedule_kind_from_string(*flags.topology_kind);
    if (flags.dataset_csv) {
        cfg.dataset.type = DatasetSource::Type::csv;
        cfg.dataset.csv_path = *flags.dataset_csv;
    }
    if (flags.model_kind) cfg.model_kind = model_kind_from_string(*flags.model_kind);
    if (flags.hidden_dim) cfg.hidden_dim = *flags.hidden_dim;
    if (flags.exec) cfg.exec = exec_mode_from_string(*flags.exec);

    cfg.validate();
    return cfg;
}

void check_comparable(const std::vector<SimConfig>& cfgs) {
    if (cfgs.size() < 2) throw std::runtime_error("compare: need at least 2 configs");
    json base = config_to_json(cfgs.front());
    base.erase("algorithm");
    base.erase("partition");
    for (std::size_t i = 1; i < cfgs.size(); ++i) {
        json other = config_to_json(cfgs[i]);
        other.erase("algorithm");
        other.erase("partition");
        if (other != base) {
            for (const auto& [key, val] : base.items()) {
                if (other.at(key) != val) {
                    throw std::runtime_error(
                        "compare: config " + std::to_string(i) + " differs from config 0 in '" +
                        key + "' (only algorithm and partition may vary)");
                }
            }
            throw std::runtime_error("compare: configs differ outside algorithm/partition");
        }
    }
}

}  // namespace pfedgame
