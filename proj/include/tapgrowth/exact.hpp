#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>

namespace tapgrowth {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Kernel parameters in exact arithmetic. rho is restricted to positive integers
// so that every alpha_i stays rational.
struct ExactKernelParams {
    Rational p;
    Rational theta;
    unsigned rho = 2;
    int cutoff = 4;
};

BigInt exact_binomial(std::uint64_t m, int i);

Rational exact_alpha(int i, const ExactKernelParams& params);

// Exact right-hand side of the cambiodiversity recurrence at integer m.
Rational exact_increment(std::uint64_t m, const ExactKernelParams& params);

// Same with explicit weights: P * sum_{i=1}^{weights.size()} weights[i-1] * C(m, i).
Rational exact_increment(std::uint64_t m, const Rational& p, std::span<const Rational> weights);

// Exact rational value of a finite double.
Rational to_rational(double value);

}  // namespace tapgrowth
