#include <doctest.h>

#include "support.hpp"
#include "tapgrowth/errors.hpp"
#include "tapgrowth/economy.hpp"
#include "tapgrowth/presets.hpp"

#include <cmath>
#include <cstring>
#include <random>

using namespace tapgrowth;

namespace {

const MacroParams kMacro{};
constexpr double kY0 = 1.82741e11;
constexpr double kL0 = 1.7e8;

bool bit_identical(const Trajectory& a, const Trajectory& b) {
    if (a.states.size() != b.states.size() || a.divergence != b.divergence) {
        return false;
    }
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        const auto& x = a.states[i];
        const auto& y = b.states[i];
        if (x.year != y.year || std::memcmp(&x.m, &y.m, sizeof(double)) != 0 ||
            std::memcmp(&x.k, &y.k, sizeof(double)) != 0 ||
            std::memcmp(&x.l, &y.l, sizeof(double)) != 0 ||
            std::memcmp(&x.y, &y.y, sizeof(double)) != 0) {
            return false;
        }
    }
    return true;
}

// Parameters that stay finite over AD 1..2015.
KernelParams slow_kernel() { return {1.5e-5, {}}; }

}  // namespace

TEST_CASE("output and capital_step") {
    CHECK(output(1, 1, 1, 1.0 / 3.0) == doctest::Approx(1.0));
    CHECK(output(50, 1.6886e12, 1.7e8, 1.0 / 3.0) == doctest::Approx(kY0).epsilon(1e-3));
    CHECK_THROWS_AS(output(1e300, 1e300, 1e300, 0.5), DivergenceError);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double m = u(rng) * 50;
        const double k = u(rng) * 1e12;
        const double l = u(rng) * 1e8;
        const double c = u(rng);
        const double beta = u(rng) / 10.01;
        CHECK(output(m, c * k, c * l, beta) ==
              doctest::Approx(c * output(m, k, l, beta)).epsilon(1e-12));
    }
    CHECK(output(50, 8e12, 8e8, 1.0 / 3.0) ==
          doctest::Approx(8 * output(50, 1e12, 1e8, 1.0 / 3.0)).epsilon(1e-12));

    CHECK(capital_step(kY0, 1.6886e12, kMacro) == doctest::Approx(1.63297e12).epsilon(1e-5));
    CHECK(capital_step(0.0, 100.0, kMacro) == doctest::Approx(94.0));
    CHECK(capital_step(10.0, 100.0, {1.0 / 3.0, 0.25, 0.0}) == 102.5);
}

TEST_CASE("backout_initial_capital") {
    CHECK(backout_initial_capital(kY0, 50, kL0, 1.0 / 3.0) ==
          doctest::Approx(1689274147292.7322).epsilon(1e-12));
    CHECK(backout_initial_capital(kY0, 88, kL0, 1.0 / 3.0) ==
          doctest::Approx(309857585361.67523).epsilon(1e-12));
    CHECK(backout_initial_capital(1, 1, 1, 0.4) == doctest::Approx(1.0));
    CHECK_THROWS_AS(backout_initial_capital(-1, 1, 1, 0.4), std::invalid_argument);

    const auto s = initial_state(1, kY0, 50, kL0, 1.0 / 3.0);
    CHECK(s.y == doctest::Approx(kY0).epsilon(1e-13));
}

TEST_CASE("first-year capital under the three presets") {
    for (const auto& preset : kPresets) {
        const auto p = *preset_parameters(preset.name);
        const auto s = initial_state(1, p.y0, p.m0, p.l0, p.beta);
        const double k1 = capital_step(s.y, s.k, p.macro());
        if (preset.name == "m50-d006") {
            CHECK(k1 < s.k);
            CHECK(k1 == doctest::Approx(1633602948455.1682).epsilon(1e-12));
        } else if (preset.name == "m88-d006") {
            CHECK(k1 > s.k);
            CHECK(k1 == doctest::Approx(336951380239.97473).epsilon(1e-12));
        } else {
            CHECK(k1 > s.k);
        }
    }
}

TEST_CASE("simulate") {
    const auto population = testing::sample_population();
    const auto init = initial_state(1, kY0, 50, kL0, kMacro.beta);

    SUBCASE("structure and Cobb-Douglas consistency") {
        const auto t = simulate(init, slow_kernel(), kMacro, population, {1, 2015});
        REQUIRE_FALSE(t.diverged());
        CHECK(t.states.size() == 2015);
        for (std::size_t i = 0; i < t.states.size(); ++i) {
            const auto& s = t.states[i];
            CHECK(s.year == static_cast<Year>(i) + 1);
            CHECK(s.y == output(s.m, s.k, s.l, kMacro.beta));
            CHECK(s.l == interpolate(population, s.year));
            if (i > 0) {
                const auto& prev = t.states[i - 1];
                CHECK(s.m > prev.m);
                CHECK(s.k == capital_step(prev.y, prev.k, kMacro));
                CHECK(s.m == prev.m + expected_increment(prev.m, slow_kernel()));
            }
        }
    }

    SUBCASE("delta = 0 keeps capital rising") {
        const MacroParams no_depreciation{1.0 / 3.0, 0.25, 0.0};
        const auto t = simulate(init, slow_kernel(), no_depreciation, population, {1, 2015});
        for (std::size_t i = 1; i < t.states.size(); ++i) {
            CHECK(t.states[i].k > t.states[i - 1].k);
        }
    }

    SUBCASE("deterministic runs are bit-identical") {
        const auto a = simulate(init, slow_kernel(), kMacro, population, {1, 2015});
        const auto b = simulate(init, slow_kernel(), kMacro, population, {1, 2015});
        CHECK(bit_identical(a, b));
    }

    SUBCASE("stochastic runs repeat for a seed and keep integer m") {
        const auto a = simulate(init, {0.0006, {}}, kMacro, population, {1, 2015},
                                {SimulationMode::stochastic(17)});
        const auto b = simulate(init, {0.0006, {}}, kMacro, population, {1, 2015},
                                {SimulationMode::stochastic(17)});
        CHECK(bit_identical(a, b));
        for (std::size_t i = 1; i < a.states.size(); ++i) {
            CHECK(a.states[i].m >= a.states[i - 1].m);
            CHECK(a.states[i].m == std::floor(a.states[i].m));
        }
        CHECK_THROWS_AS(simulate(initial_state(1, kY0, 50.5, kL0, kMacro.beta), {0.0006, {}},
                                 kMacro, population, {1, 10}, {SimulationMode::stochastic(1)}),
                        ConfigError);
    }

    SUBCASE("baseline diverges and marks the year") {
        const auto t = simulate(init, {0.0006, {}}, kMacro, population, {1, 2015});
        REQUIRE(t.diverged());
        CHECK(*t.divergence == 70);
        CHECK(t.states.back().year == 69);
        for (const auto& s : t.states) {
            CHECK(std::isfinite(s.y));
        }
    }

    SUBCASE("vanishing P holds m fixed; capital moves monotonically toward its fixed point") {
        const auto flat = testing::flat_population(1, 3000);
        const auto t = simulate(init, {1e-30, {}}, kMacro, flat, {1, 3000});
        int sign_changes = 0;
        double previous_step = 0.0;
        for (std::size_t i = 1; i < t.states.size(); ++i) {
            CHECK(t.states[i].m == doctest::Approx(50.0).epsilon(1e-20));
            const double step = t.states[i].k - t.states[i - 1].k;
            if (previous_step != 0.0 && step != 0.0 && (step > 0) != (previous_step > 0)) {
                ++sign_changes;
            }
            if (step != 0.0) {
                previous_step = step;
            }
        }
        CHECK(sign_changes <= 1);
        // K* solves s*m*K^beta*L^(1-beta) = delta*K.
        const double k_star = std::pow(0.25 * 50 / 0.06, 1.5) * kL0;
        CHECK(t.states.back().k == doctest::Approx(k_star).epsilon(1e-6));
    }

    SUBCASE("configuration errors") {
        CHECK_THROWS_AS(simulate(init, {0.0, {}}, kMacro, population, {1, 10}), ConfigError);
        CHECK_THROWS_AS(simulate(init, slow_kernel(), {1.5, 0.25, 0.06}, population, {1, 10}),
                        ConfigError);
        CHECK_THROWS_AS(simulate(init, slow_kernel(), kMacro, population, {2, 10}), ConfigError);
        CHECK_THROWS_AS(simulate(init, slow_kernel(), kMacro, population, {1, 2100}),
                        ConfigError);
        CHECK_NOTHROW(simulate(init, {0.0, {}}, kMacro, population, {1, 10},
                               {SimulationMode::deterministic(), false}));
    }
}

TEST_CASE("extend_backward") {
    const auto population = testing::sample_population();
    const auto anchor = initial_state(1, kY0, 50, kL0, kMacro.beta);
    const KernelParams baseline{};

    SUBCASE("empty extension returns the anchor") {
        const auto ext = extend_backward(anchor, baseline, kMacro, population, 1);
        REQUIRE(ext.trajectory.states.size() == 1);
        CHECK(ext.trajectory.states[0].m == anchor.m);
    }

    SUBCASE("from 350 BC the forward run reproduces the anchor") {
        const auto ext = extend_backward(anchor, baseline, kMacro, population, -349);
        CHECK(ext.start_m < 50.0);
        CHECK(ext.start_m > 1.0);
        const auto& states = ext.trajectory.states;
        REQUIRE(states.size() == 351);
        CHECK(states.front().year == -349);
        CHECK(states.back().year == 1);

        double m = ext.start_m;
        for (int i = 0; i < 350; ++i) {
            m += expected_increment(m, baseline);
        }
        CHECK(std::abs(m - 50.0) <= 1e-6 * 50.0);

        double k = ext.start_k;
        for (std::size_t i = 0; i + 1 < states.size(); ++i) {
            CHECK(states[i].y == output(states[i].m, states[i].k, states[i].l, kMacro.beta));
            k = capital_step(states[i].y, k, kMacro);
        }
        CHECK(k == doctest::Approx(anchor.k).epsilon(1e-6));
        CHECK(ext.first_capital_decline == first_capital_decline(ext.trajectory));
    }

    SUBCASE("larger anchor m needs a larger start m") {
        const auto a = extend_backward(anchor, baseline, kMacro, population, -199);
        const auto b = extend_backward(initial_state(1, kY0, 60, kL0, kMacro.beta), baseline,
                                       kMacro, population, -199);
        CHECK(b.start_m > a.start_m);
    }

    SUBCASE("unreachable anchors are rejected") {
        // Even m = 1 overshoots the anchor over this many years.
        CHECK_THROWS_AS(extend_backward(anchor, baseline, kMacro,
                                        testing::flat_population(-100000, 1), -90000),
                        ConfigError);
        CHECK_THROWS_AS(extend_backward(anchor, baseline, kMacro, population, 5), ConfigError);
    }
}

TEST_CASE("first_capital_decline") {
    Trajectory t;
    t.states = {{1, 1, 10, 1, 1}, {2, 1, 11, 1, 1}, {3, 1, 10.5, 1, 1}, {4, 1, 9, 1, 1}};
    CHECK(first_capital_decline(t) == Year{3});
    t.states.resize(2);
    CHECK_FALSE(first_capital_decline(t).has_value());
}
