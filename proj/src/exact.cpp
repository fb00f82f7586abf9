#include "tapgrowth/exact.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tapgrowth {

BigInt exact_binomial(std::uint64_t m, int i) {
    if (i < 0) {
        throw std::invalid_argument("exact_binomial: negative size");
    }
    if (static_cast<std::uint64_t>(i) > m) {
        return 0;
    }
    BigInt c = 1;
    for (int k = 0; k < i; ++k) {
        c *= BigInt(m - static_cast<std::uint64_t>(k));
        c /= k + 1;
    }
    return c;
}

Rational exact_alpha(int i, const ExactKernelParams& params) {
    if (i < 1) {
        throw std::invalid_argument("exact_alpha: size must be >= 1");
    }
    if (i > params.cutoff) {
        return 0;
    }
    const Rational base = Rational(i) * params.theta;
    Rational power = 1;
    for (unsigned k = 0; k < params.rho; ++k) {
        power *= base;
    }
    return 1 / power;
}

Rational exact_increment(std::uint64_t m, const ExactKernelParams& params) {
    std::vector<Rational> weights;
    for (int i = 1; i <= params.cutoff; ++i) {
        weights.push_back(exact_alpha(i, params));
    }
    return exact_increment(m, params.p, weights);
}

Rational exact_increment(std::uint64_t m, const Rational& p, std::span<const Rational> weights) {
    Rational sum = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        sum += weights[k] * Rational(exact_binomial(m, static_cast<int>(k) + 1));
    }
    return p * sum;
}

Rational to_rational(double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("to_rational: value is not finite");
    }
    int exponent = 0;
    const double mantissa = std::frexp(value, &exponent);
    // 53 bits of mantissa scaled to an integer.
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    exponent -= 53;
    Rational r(scaled);
    if (exponent > 0) {
        r *= Rational(BigInt(1) << exponent);
    } else if (exponent < 0) {
        r /= Rational(BigInt(1) << -exponent);
    }
    return r;
}

}  // namespace tapgrowth
