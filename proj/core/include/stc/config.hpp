#pragma once

#include <span>
#include <string>
#include <utility>

#include "stc/data.hpp"
#include "stc/federation.hpp"

namespace stc {

// Experiment description: the federated environment plus the data source.
struct ExperimentConfig {
    FedConfig fed;
    std::string dataset = "synth"; // mnist | fashion_mnist | synth
    std::string data_dir = "data";
};

// Parse a key=value config file ('#' starts a comment). Every documented key
// is read; unknown keys are rejected; `method` is required. Overrides are
// additional key=value pairs applied after the file (CLI flags).
ExperimentConfig parse_experiment_config(const std::string& path,
                                         std::span<const std::string> overrides);

// Same, from in-memory lines (no file).
ExperimentConfig parse_experiment_lines(std::span<const std::string> lines,
                                        std::span<const std::string> overrides);

// Load the train/test pair named by the config. IDX files are expected under
// data_dir; the synth source generates deterministic blobs from the seed.
std::pair<Dataset, Dataset> load_datasets(const ExperimentConfig& cfg);

} // namespace stc
