#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tapgrowth/kernel.hpp"
#include "tapgrowth/series.hpp"

namespace tapgrowth {

struct MacroParams {
    double beta = 1.0 / 3.0;  // capital share
    double s = 0.25;          // saving rate
    double delta = 0.06;      // depreciation
};

Verdict validate_macro(const MacroParams& macro);

// One year of the economy. Build through make_state so that y always equals
// m * k^beta * l^(1-beta).
struct EconomyState {
    Year year = 0;
    double m = 0.0;
    double k = 0.0;
    double l = 0.0;
    double y = 0.0;
};

enum class Mode { deterministic, stochastic };

struct SimulationMode {
    Mode kind = Mode::deterministic;
    std::uint64_t seed = 0;

    static SimulationMode deterministic() { return {}; }
    static SimulationMode stochastic(std::uint64_t seed) { return {Mode::stochastic, seed}; }
    bool operator==(const SimulationMode&) const = default;
};

struct Trajectory {
    std::vector<EconomyState> states;  // consecutive years
    std::optional<Year> divergence;    // first year whose values were non-finite
    SimulationMode mode;
    YearRange horizon;  // requested range; states may stop early on divergence

    bool diverged() const noexcept { return divergence.has_value(); }
    Year first_year() const { return states.front().year; }
    Year last_year() const { return states.back().year; }
};

// Cobb-Douglas output m * k^beta * l^(1-beta). Throws DivergenceError when the
// result is not finite.
double output(double m, double k, double l, double beta);

// Capital accumulation s*y + (1-delta)*k.
double capital_step(double y, double k, const MacroParams& macro);

// The unique k with output(m0, k, l0, beta) == y0.
double backout_initial_capital(double y0, double m0, double l0, double beta);

EconomyState make_state(Year year, double m, double k, double l, double beta);

// Initial state with capital backed out from the output level.
EconomyState initial_state(Year year, double y0, double m0, double l0, double beta);

struct SimulateOptions {
    SimulationMode mode;
    // Test harnesses may switch this off to run degenerate kernels such as p = 0.
    bool check_params = true;
};

// Yearly recurrence over `horizon` (horizon.first must equal initial.year). Per
// year: m grows by one kernel increment, k follows capital_step using last
// year's output, l is read from `population`, and y is recomputed.
// Throws ConfigError for invalid parameters or insufficient population
// coverage. Non-finite values end the trajectory and set `divergence`.
Trajectory simulate(const EconomyState& initial, const KernelParams& kernel,
                    const MacroParams& macro, const AnnualSeries& population, YearRange horizon,
                    SimulateOptions options = {});

struct BackwardExtension {
    Trajectory trajectory;  // start_year .. anchor year, ending with the anchor itself
    double start_m = 0.0;
    double start_k = 0.0;
    std::optional<Year> first_capital_decline;  // first year t with k_t < k_{t-1}
};

// Finds the state at `start_year` whose deterministic forward run reaches the
// anchor's m (relative 1e-6) and k at the anchor year, by bisection on each.
// Throws ConfigError when the anchor cannot be reached even from m = 1.
BackwardExtension extend_backward(const EconomyState& anchor, const KernelParams& kernel,
                                  const MacroParams& macro, const AnnualSeries& population,
                                  Year start_year);

std::optional<Year> first_capital_decline(const Trajectory& trajectory);

}  // namespace tapgrowth
