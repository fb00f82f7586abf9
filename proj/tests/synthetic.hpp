#pragma once

#include "tapgrowth/calibration.hpp"
#include "tapgrowth/economy.hpp"
#include "tapgrowth/presets.hpp"

namespace testing {

// Benchmark sampled from a deterministic run with known parameters. When that
// run diverges the horizon stops at 60% of the divergence year, so that nearby
// candidates stay finite too.
struct SyntheticProblem {
    tapgrowth::ModelParameters truth;
    tapgrowth::YearRange horizon;
    tapgrowth::AnnualSeries benchmark;
};

inline SyntheticProblem make_synthetic(const tapgrowth::AnnualSeries& population,
                                       tapgrowth::ModelParameters truth, int points = 12) {
    using namespace tapgrowth;
    const auto init = initial_state(1, truth.y0, truth.m0, truth.l0, truth.beta);
    const auto full = simulate(init, truth.kernel(), truth.macro(), population, {1, 2015});
    const Year last = full.diverged() ? std::max<Year>(*full.divergence * 6 / 10, 10) : 2015;
    std::vector<Checkpoint> rows;
    for (int j = 0; j < points; ++j) {
        const Year year = 1 + (last - 1) * j / (points - 1);
        if (!rows.empty() && rows.back().year == year) {
            continue;
        }
        rows.push_back({year, full.states[static_cast<std::size_t>(year - 1)].y});
    }
    return {truth, {1, last}, AnnualSeries("gdp", "synthetic", std::move(rows))};
}

inline tapgrowth::CalibrationSpec synthetic_spec(const tapgrowth::AnnualSeries& population,
                                                 const SyntheticProblem& problem) {
    tapgrowth::CalibrationSpec spec(population, problem.benchmark);
    spec.fixed = problem.truth;
    spec.horizon = problem.horizon;
    return spec;
}

}  // namespace testing
