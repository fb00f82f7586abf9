#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tapgrowth/economy.hpp"
#include "tapgrowth/series.hpp"

namespace tapgrowth {

enum class TakeoffQuantity { output, goods };

// Takeoff fires at the end of the first `window` consecutive years in which
// every one-year log-growth of the chosen quantity exceeds `threshold`.
struct TakeoffRule {
    int window = 20;
    double threshold = 0.01;
    TakeoffQuantity quantity = TakeoffQuantity::output;
};

// First year at which the rule fires. A divergence year reached before that
// counts as takeoff. Empty if neither happens within the trajectory.
std::optional<Year> takeoff_time(const Trajectory& trajectory, const TakeoffRule& rule);

// Per-run seed: SplitMix64 finalizer applied to
// master_seed + (run_index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t run_index);

struct EnsembleConfig {
    EnsembleConfig(EconomyState initial, KernelParams kernel, MacroParams macro,
                   AnnualSeries population)
        : initial(initial), kernel(kernel), macro(macro), population(std::move(population)) {}

    EconomyState initial;
    KernelParams kernel;
    MacroParams macro;
    // Years past the end of coverage reuse the last checkpoint value.
    AnnualSeries population;
    int runs = 100;
    std::uint64_t master_seed = 0;
    Year horizon_end = 2015;  // initial horizon is [initial.year, horizon_end]
    // Runs that have not taken off double their horizon length until it spans
    // this many simulated years.
    Year horizon_cap = 1'000'000;
    TakeoffRule takeoff;
    unsigned threads = 0;
    bool check_params = true;
};

void validate_config(const EnsembleConfig& config);

struct RunOutcome {
    std::uint64_t seed = 0;
    std::optional<Year> takeoff;
    std::optional<Year> divergence;
    Year simulated_through = 0;  // last horizon year attempted
};

// Summary over runs that reached takeoff. Quantiles use linear interpolation
// between order statistics (position q*(n-1)); all are empty when no run
// reached takeoff.
struct HittingTimeStats {
    std::vector<RunOutcome> runs;
    std::optional<double> mean;
    std::optional<double> median;
    std::optional<double> q05;
    std::optional<double> q95;
    double reached_fraction = 0.0;
};

RunOutcome run_single(const EnsembleConfig& config, std::uint64_t run_index);

// Runs are independent and may execute in any order; results are reduced in
// run-index order so the output does not depend on `threads`.
HittingTimeStats run_ensemble(const EnsembleConfig& config);

HittingTimeStats summarize_runs(std::vector<RunOutcome> runs);

}  // namespace tapgrowth
