#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smdg/mc.hpp"

namespace smdg::cli {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<int> threads;
};

// Flat-JSON config file -> validated ExperimentConfig. Precedence:
// flags > file values > SMDG_SEED env (seed only) > command defaults.
// Unknown keys and out-of-range values raise config_error with the key named.
ExperimentConfig parse_config(const std::string& config_path, const std::string& command,
                              const Overrides& overrides);

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::uint64_t root_seed = 0;
    double runtime_seconds = 0.0;
    std::vector<std::string> outputs; // absolute or out_dir-relative paths
};

// Runs a command and writes its outputs (table.csv / energy.csv / fields.csv
// and manifest.json) under out_dir. Partial outputs are removed on failure.
// Commands: run1d, run2d, convergence, energy, order-check.
RunManifest dispatch(const std::string& command, const ExperimentConfig& config,
                     const std::string& out_dir, bool dump_fields = false);

// Canonical serialized form of a config (sorted keys); config_hash is the
// FNV-1a of this string.
std::string canonical_config(const ExperimentConfig& config);

} // namespace smdg::cli
