#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tapgrowth/economy.hpp"
#include "tapgrowth/presets.hpp"
#include "tapgrowth/series.hpp"

namespace tapgrowth {

// Positive search interval, explored on a log scale.
struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
};

struct CalibrationSpec {
    CalibrationSpec(AnnualSeries population, AnnualSeries benchmark)
        : population(std::move(population)), benchmark(std::move(benchmark)) {}

    ModelParameters fixed;  // everything not being fitted; fixed.p and fixed.m0 are ignored when free
    Year start_year = 1;
    YearRange horizon{1, 2015};
    Bounds p_bounds{1e-8, 1e-1};
    std::optional<Bounds> m0_bounds;  // set to fit m0 as well
    int grid = 25;                    // points per free dimension
    int refine_iters = 200;
    unsigned threads = 0;  // grid workers; 0 = hardware concurrency
    AnnualSeries population;
    AnnualSeries benchmark;

    int dimensions() const { return m0_bounds ? 2 : 1; }
};

// Throws ConfigError naming the first problem.
void validate_spec(const CalibrationSpec& spec);

struct Candidate {
    double p = 0.0;
    double m0 = 0.0;
    bool operator==(const Candidate&) const = default;
};

struct Evaluation {
    Candidate params;
    double loss = 0.0;
};

struct ReferenceLoss {
    std::string name;
    ModelParameters params;
    double loss = 0.0;
};

struct CalibrationResult {
    ModelParameters best;  // full parameter set with the fitted values filled in
    double loss = 0.0;     // +inf when every evaluation diverged
    std::vector<Evaluation> trace;
    int diverged_count = 0;
    std::vector<ReferenceLoss> references;  // filled by calibrate()

    Candidate best_candidate() const { return {best.p, best.m0}; }
};

// sqrt(mean((ln y_sim - ln y_bench)^2)) over benchmark years inside the
// trajectory's horizon; +inf if the trajectory diverged before any of them.
// Throws DataError when no benchmark year lies inside the horizon.
double loss_log_rmse(const Trajectory& trajectory, const AnnualSeries& benchmark);

// Deterministic run for one candidate; invalid or diverging candidates score +inf.
double evaluate_candidate(const CalibrationSpec& spec, Candidate candidate);

Trajectory simulate_candidate(const CalibrationSpec& spec, Candidate candidate);

CalibrationResult grid_search(const CalibrationSpec& spec);

// Downhill simplex over log-parameters, clamped to the bounds.
CalibrationResult refine(Candidate start, const CalibrationSpec& spec);

// grid_search, then refine from the best grid point; also scores each preset
// at its published parameters.
CalibrationResult calibrate(const CalibrationSpec& spec);

}  // namespace tapgrowth
