#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tapgrowth/verdict.hpp"

namespace tapgrowth {

// Weights of size-i combinations: alpha_i = 1/(i*theta)^rho for i <= cutoff, 0 beyond.
struct AlphaSchedule {
    double theta = 6.0;
    double rho = 2.0;
    int cutoff = 4;
};

// Per-combination success scale P together with its alpha schedule.
struct KernelParams {
    double p = 0.0006;
    AlphaSchedule alpha;
};

using RandomStream = std::mt19937_64;

// Above this many trials a size-i class is sampled as Poisson instead of binomial.
inline constexpr double kBinomialTrialLimit = 1e6;

double alpha(int i, const AlphaSchedule& schedule);

// Falling-factorial binomial m(m-1)...(m-i+1)/i!, zero for m < i-1. Equals the
// ordinary binomial coefficient for integer m (and is zero there when m < i).
double generalized_choose(double m, int i);

Verdict validate_params(const KernelParams& params);

// Expected one-year increase in cambiodiversity: P * sum_i alpha_i * C(m, i).
// Throws DivergenceError when the sum overflows.
double expected_increment(double m, const KernelParams& params);

// One sampled increment for an integer-valued count m. Each of the C(m, i)
// size-i combinations succeeds independently with probability P*alpha_i.
double stochastic_increment(double m, const KernelParams& params, RandomStream& rng);

// Same, with explicit per-size success probabilities (index 0 is size 1).
double stochastic_increment(double m, std::span<const double> success_probability,
                            RandomStream& rng);

// Blow-up horizon (years) of the continuous dominant-term approximation
// dM/dt = P*alpha_4*M^4/24, i.e. 8/(P*alpha_4*m^3). Empty when alpha_4 == 0.
std::optional<double> blowup_estimate(double m, const KernelParams& params);

}  // namespace tapgrowth
