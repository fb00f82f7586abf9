#include "tapgrowth/ensemble.hpp"

#include "tapgrowth/errors.hpp"
#include "tapgrowth/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace tapgrowth {

namespace {

double quantity_of(const EconomyState& s, TakeoffQuantity q) {
    return q == TakeoffQuantity::output ? s.y : s.m;
}

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::optional<Year> takeoff_time(const Trajectory& trajectory, const TakeoffRule& rule) {
    const auto& s = trajectory.states;
    int streak = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double growth = std::log(quantity_of(s[i], rule.quantity) /
                                       quantity_of(s[i - 1], rule.quantity));
        streak = growth > rule.threshold ? streak + 1 : 0;
        if (streak >= rule.window) {
            return s[i].year;
        }
    }
    return trajectory.divergence;
}

std::uint64_t split_seed(std::uint64_t master_seed, std::uint64_t run_index) {
    std::uint64_t z = master_seed + (run_index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void validate_config(const EnsembleConfig& config) {
    if (config.runs < 1) {
        throw ConfigError("ensemble needs at least one run");
    }
    if (config.takeoff.window < 1 || !(config.takeoff.threshold > 0.0)) {
        throw ConfigError("takeoff rule needs window >= 1 and threshold > 0");
    }
    if (config.horizon_end <= config.initial.year) {
        throw ConfigError("ensemble horizon must extend past the initial year");
    }
    if (config.horizon_cap < config.horizon_end - config.initial.year + 1) {
        throw ConfigError("horizon cap is shorter than the initial horizon");
    }
    if (config.check_params) {
        if (auto v = validate_params(config.kernel); !v) {
            throw ConfigError("invalid kernel parameters: " + v.message());
        }
    }
    if (config.population.coverage().first > config.initial.year) {
        throw ConfigError("population does not cover the initial year");
    }
}

RunOutcome run_single(const EnsembleConfig& config, std::uint64_t run_index) {
    RunOutcome out;
    out.seed = split_seed(config.master_seed, run_index);
    const Year start = config.initial.year;
    const Year cap_end = start + config.horizon_cap - 1;
    const auto population = config.population.extended_flat_to(cap_end);
    SimulateOptions options{SimulationMode::stochastic(out.seed), config.check_params};

    Year end = config.horizon_end;
    for (;;) {
        // Same seed, longer horizon: the first years repeat exactly.
        const auto traj = simulate(config.initial, config.kernel, config.macro, population,
                                   {start, end}, options);
        out.simulated_through = end;
        out.divergence = traj.divergence;
        out.takeoff = takeoff_time(traj, config.takeoff);
        if (out.takeoff || end >= cap_end) {
            return out;
        }
        end = std::min(cap_end, start + 2 * (end - start + 1) - 1);
    }
}

HittingTimeStats summarize_runs(std::vector<RunOutcome> runs) {
    HittingTimeStats stats;
    std::vector<double> times;
    for (const auto& r : runs) {
        if (r.takeoff) {
            times.push_back(static_cast<double>(*r.takeoff));
        }
    }
    stats.reached_fraction =
        runs.empty() ? 0.0 : static_cast<double>(times.size()) / static_cast<double>(runs.size());
    if (!times.empty()) {
        double sum = 0.0;
        for (double t : times) {
            sum += t;
        }
        stats.mean = sum / static_cast<double>(times.size());
        std::sort(times.begin(), times.end());
        stats.median = quantile(times, 0.5);
        stats.q05 = quantile(times, 0.05);
        stats.q95 = quantile(times, 0.95);
    }
    stats.runs = std::move(runs);
    return stats;
}

HittingTimeStats run_ensemble(const EnsembleConfig& config) {
    validate_config(config);
    std::vector<RunOutcome> runs(static_cast<std::size_t>(config.runs));
    parallel_for(runs.size(), config.threads,
                 [&](std::size_t i) { runs[i] = run_single(config, i); });
    return summarize_runs(std::move(runs));
}

}  // namespace tapgrowth
