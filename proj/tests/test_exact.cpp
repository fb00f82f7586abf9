#include <doctest.h>

#include "tapgrowth/exact.hpp"

#include <array>
#include <cmath>

using namespace tapgrowth;

TEST_CASE("exact_binomial") {
    CHECK(exact_binomial(50, 2) == 1225);
    CHECK(exact_binomial(50, 4) == 230300);
    CHECK(exact_binomial(3, 4) == 0);
    CHECK(exact_binomial(0, 1) == 0);
    CHECK(exact_binomial(1'000'000, 4) == BigInt("41666416667124999750000"));
}

TEST_CASE("exact_alpha") {
    const ExactKernelParams p{Rational(6, 10000), Rational(6), 2, 4};
    CHECK(exact_alpha(1, p) == Rational(1, 36));
    CHECK(exact_alpha(3, p) == Rational(1, 324));
    CHECK(exact_alpha(4, p) == Rational(1, 576));
    CHECK(exact_alpha(5, p) == 0);
}

TEST_CASE("exact_increment") {
    const ExactKernelParams baseline{Rational(6, 10000), Rational(6), 2, 4};
    CHECK(exact_increment(50, baseline) == Rational(3047, 10800));
    CHECK(exact_increment(10, baseline) == Rational(229, 288000));
    CHECK(exact_increment(1, baseline) == Rational(1, 60000));
    CHECK(exact_increment(0, baseline) == 0);
    CHECK(std::abs(static_cast<double>(exact_increment(50, baseline)) - 0.2821296) < 1e-6);

    const std::array<Rational, 4> ones{1, 1, 1, 1};
    CHECK(exact_increment(4, Rational(1), ones) == 15);
    CHECK(exact_increment(10, Rational(1), ones) == 385);
}

TEST_CASE("to_rational is exact") {
    CHECK(to_rational(0.5) == Rational(1, 2));
    CHECK(to_rational(0.0) == 0);
    CHECK(to_rational(-3.0) == -3);
    CHECK(static_cast<double>(to_rational(0.1)) == 0.1);
    CHECK(to_rational(0.1) != Rational(1, 10));
    CHECK(static_cast<double>(to_rational(1e300)) == 1e300);
    CHECK(static_cast<double>(to_rational(5e-324)) == 5e-324);
}
