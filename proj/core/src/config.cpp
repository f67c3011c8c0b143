#include "stc/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <vector>

namespace stc {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

const char* const kKnownKeys[] = {
    "model",      "dataset",   "data_dir",  "num_clients",   "participation",
    "classes_per_client", "batch_size", "gamma", "alpha",    "method",
    "p_up",       "p_down",    "delay_n",   "lr",            "momentum",
    "signsgd_delta", "total_iterations", "eval_every", "cache_horizon", "seed",
};

bool is_known_key(const std::string& k) {
    for (const char* known : kKnownKeys)
        if (k == known) return true;
    return false;
}

double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        throw ConfigError(key + ": invalid number '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0' || value.find('-') != std::string::npos)
        throw ConfigError(key + ": invalid non-negative integer '" + value + "'");
    return v;
}

std::uint32_t parse_u32(const std::string& key, const std::string& value) {
    std::uint64_t v = parse_u64(key, value);
    if (v > 0xffffffffull) throw ConfigError(key + ": value out of range");
    return static_cast<std::uint32_t>(v);
}

void insert_pair(std::map<std::string, std::string>& kv, const std::string& raw,
                 const std::string& where) {
    std::size_t eq = raw.find('=');
    if (eq == std::string::npos)
        throw ConfigError(where + ": expected key=value, got '" + raw + "'");
    std::string key = trim(raw.substr(0, eq));
    std::string value = trim(raw.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key in '" + raw + "'");
    if (!is_known_key(key)) throw ConfigError("unknown config key '" + key + "'");
    kv[key] = value; // later assignments (overrides) win
}

ExperimentConfig from_pairs(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    if (kv.find("method") == kv.end()) throw ConfigError("method is required");

    for (const auto& [key, value] : kv) {
        if (key == "model") {
            if (value == "logreg") cfg.fed.model = ModelKind::logreg;
            else if (value == "mlp") cfg.fed.model = ModelKind::mlp;
            else throw ConfigError("model: unknown value '" + value + "'");
        } else if (key == "dataset") {
            if (value != "mnist" && value != "fashion_mnist" && value != "synth")
                throw ConfigError("dataset: unknown value '" + value + "'");
            cfg.dataset = value;
        } else if (key == "data_dir") {
            cfg.data_dir = value;
        } else if (key == "num_clients") {
            cfg.fed.num_clients = parse_u32(key, value);
        } else if (key == "participation") {
            cfg.fed.participation = parse_double(key, value);
        } else if (key == "classes_per_client") {
            cfg.fed.classes_per_client = parse_u32(key, value);
        } else if (key == "batch_size") {
            cfg.fed.batch_size = parse_u32(key, value);
        } else if (key == "gamma") {
            cfg.fed.gamma = parse_double(key, value);
        } else if (key == "alpha") {
            cfg.fed.alpha = parse_double(key, value);
        } else if (key == "method") {
            cfg.fed.method = parse_method(value);
        } else if (key == "p_up") {
            cfg.fed.p_up = parse_double(key, value);
        } else if (key == "p_down") {
            cfg.fed.p_down = parse_double(key, value);
        } else if (key == "delay_n") {
            cfg.fed.delay_n = parse_u32(key, value);
        } else if (key == "lr") {
            cfg.fed.lr = static_cast<float>(parse_double(key, value));
        } else if (key == "momentum") {
            cfg.fed.momentum = static_cast<float>(parse_double(key, value));
        } else if (key == "signsgd_delta") {
            cfg.fed.signsgd_delta = static_cast<float>(parse_double(key, value));
        } else if (key == "total_iterations") {
            cfg.fed.total_iterations = parse_u64(key, value);
        } else if (key == "eval_every") {
            cfg.fed.eval_every = parse_u32(key, value);
        } else if (key == "cache_horizon") {
            cfg.fed.cache_horizon = parse_u32(key, value);
        } else if (key == "seed") {
            cfg.fed.seed = parse_u64(key, value);
        }
    }
    cfg.fed.validate();
    return cfg;
}

std::map<std::string, std::string> read_lines(std::span<const std::string> lines,
                                              std::span<const std::string> overrides) {
    std::map<std::string, std::string> kv;
    std::size_t lineno = 0;
    for (const std::string& raw_line : lines) {
        ++lineno;
        std::string line = raw_line;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        insert_pair(kv, line, "config line " + std::to_string(lineno));
    }
    for (const std::string& o : overrides) insert_pair(kv, o, "override");
    return kv;
}

} // namespace

ExperimentConfig parse_experiment_lines(std::span<const std::string> lines,
                                        std::span<const std::string> overrides) {
    return from_pairs(read_lines(lines, overrides));
}

ExperimentConfig parse_experiment_config(const std::string& path,
                                         std::span<const std::string> overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return parse_experiment_lines(lines, overrides);
}

std::pair<Dataset, Dataset> load_datasets(const ExperimentConfig& cfg) {
    if (cfg.dataset == "synth") {
        Dataset train = synth_blobs(10, 600, 32, 0.3f, mix_seed(cfg.fed.seed, 0x7e57));
        Dataset test = synth_blobs(10, 100, 32, 0.3f, mix_seed(cfg.fed.seed, 0x7e58));
        return {std::move(train), std::move(test)};
    }
    const std::string dir = cfg.data_dir;
    Dataset train = load_idx(dir + "/train-images-idx3-ubyte", dir + "/train-labels-idx1-ubyte");
    Dataset test = load_idx(dir + "/t10k-images-idx3-ubyte", dir + "/t10k-labels-idx1-ubyte");
    return {std::move(train), std::move(test)};
}

} // namespace stc
