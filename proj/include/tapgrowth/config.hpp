#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tapgrowth/economy.hpp"
#include "tapgrowth/ensemble.hpp"
#include "tapgrowth/presets.hpp"

namespace tapgrowth {

struct RunConfig {
    ModelParameters model;
    std::string preset = "m50-d006";
    Year start_year = 1;
    Year end_year = 2015;
    std::optional<Year> backcast_year;  // extend the run backward to this year
    Mode mode = Mode::deterministic;
    std::uint64_t seed = 1;
    std::filesystem::path population;
    std::filesystem::path benchmark;
    std::filesystem::path out = "out";
    bool allow_divergence = false;

    // calibrate
    bool fit_m0 = false;
    int grid = 25;
    int refine_iters = 200;
    double p_min = 1e-8;
    double p_max = 1e-1;
    double m0_min = 1.0;
    double m0_max = 500.0;

    // ensemble
    int runs = 100;
    Year horizon_cap = 1'000'000;
    TakeoffRule takeoff;
    unsigned threads = 0;

    bool operator==(const RunConfig&) const;
};

// Every accepted configuration key, in documentation order.
const std::vector<std::string>& config_keys();

// Layers, lowest priority first: baseline values, the preset (flag over file),
// the config file, then command-line overrides. Keys use underscores. Throws
// ConfigError naming the offending key for unknown keys, malformed values, or
// parameter sets that violate the model constraints.
RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       const std::map<std::string, std::string>& overrides);

// Same, with the file contents given directly (flat `key = value` lines with
// '#' comments, or a JSON object).
RunConfig parse_config_text(const std::string& text,
                            const std::map<std::string, std::string>& overrides);

void validate_run_config(const RunConfig& config);

std::filesystem::path default_data_dir();

}  // namespace tapgrowth
