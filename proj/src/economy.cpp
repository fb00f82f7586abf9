#include "tapgrowth/economy.hpp"

#include "tapgrowth/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tapgrowth {

namespace {

bool finite_positive(double v) { return v > 0.0 && std::isfinite(v); }

std::vector<double> population_path(const AnnualSeries& population, YearRange horizon) {
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(horizon.length()));
    for (Year y = horizon.first; y <= horizon.last; ++y) {
        path.push_back(interpolate(population, y));
    }
    return path;
}

// Deterministic m after `steps` years from m0; +inf once it diverges.
double advance_m(double m0, const KernelParams& kernel, Year steps) {
    double m = m0;
    try {
        for (Year i = 0; i < steps; ++i) {
            m += expected_increment(m, kernel);
            if (!std::isfinite(m)) {
                return std::numeric_limits<double>::infinity();
            }
        }
    } catch (const DivergenceError&) {
        return std::numeric_limits<double>::infinity();
    }
    return m;
}

}  // namespace

Verdict validate_macro(const MacroParams& macro) {
    Verdict verdict;
    if (!(macro.beta > 0.0 && macro.beta < 1.0)) {
        verdict.violations.push_back("beta must lie in (0, 1) (got " + std::to_string(macro.beta) +
                                     ")");
    }
    if (!(macro.s > 0.0 && macro.s < 1.0)) {
        verdict.violations.push_back("s must lie in (0, 1) (got " + std::to_string(macro.s) + ")");
    }
    if (!(macro.delta >= 0.0 && macro.delta < 1.0)) {
        verdict.violations.push_back("delta must lie in [0, 1) (got " +
                                     std::to_string(macro.delta) + ")");
    }
    return verdict;
}

double output(double m, double k, double l, double beta) {
    const double y = m * std::pow(k, beta) * std::pow(l, 1.0 - beta);
    if (!std::isfinite(y)) {
        throw DivergenceError("output is not finite");
    }
    return y;
}

double capital_step(double y, double k, const MacroParams& macro) {
    return macro.s * y + (1.0 - macro.delta) * k;
}

double backout_initial_capital(double y0, double m0, double l0, double beta) {
    if (!(finite_positive(y0) && finite_positive(m0) && finite_positive(l0))) {
        throw std::invalid_argument("backout_initial_capital: inputs must be positive");
    }
    return std::pow(y0 / (m0 * std::pow(l0, 1.0 - beta)), 1.0 / beta);
}

EconomyState make_state(Year year, double m, double k, double l, double beta) {
    return EconomyState{year, m, k, l, output(m, k, l, beta)};
}

EconomyState initial_state(Year year, double y0, double m0, double l0, double beta) {
    return make_state(year, m0, backout_initial_capital(y0, m0, l0, beta), l0, beta);
}

Trajectory simulate(const EconomyState& initial, const KernelParams& kernel,
                    const MacroParams& macro, const AnnualSeries& population, YearRange horizon,
                    SimulateOptions options) {
    if (options.check_params) {
        if (auto v = validate_params(kernel); !v) {
            throw ConfigError("invalid kernel parameters: " + v.message());
        }
    }
    if (auto v = validate_macro(macro); !v) {
        throw ConfigError("invalid macro parameters: " + v.message());
    }
    if (horizon.empty() || horizon.first != initial.year) {
        throw ConfigError("horizon must start at the initial state's year " +
                          std::to_string(initial.year));
    }
    if (auto v = validate_coverage(population, horizon); !v) {
        throw ConfigError("population coverage: " + v.message());
    }
    if (!(finite_positive(initial.m) && finite_positive(initial.k) && finite_positive(initial.l))) {
        throw ConfigError("initial state must have positive finite m, k and l");
    }

    const auto labor = population_path(population, horizon);
    RandomStream rng(options.mode.seed);
    const bool stochastic = options.mode.kind == Mode::stochastic;
    if (stochastic && std::floor(initial.m) != initial.m) {
        throw ConfigError("stochastic mode needs an integer initial m");
    }

    Trajectory traj;
    traj.mode = options.mode;
    traj.horizon = horizon;
    traj.states.reserve(labor.size());
    traj.states.push_back(initial);

    for (Year year = horizon.first + 1; year <= horizon.last; ++year) {
        const EconomyState& prev = traj.states.back();
        try {
            const double dm = stochastic ? stochastic_increment(prev.m, kernel, rng)
                                         : expected_increment(prev.m, kernel);
            EconomyState next;
            next.year = year;
            next.m = prev.m + dm;
            next.k = capital_step(prev.y, prev.k, macro);
            next.l = labor[static_cast<std::size_t>(year - horizon.first)];
            if (!std::isfinite(next.m) || !std::isfinite(next.k)) {
                throw DivergenceError("state is not finite");
            }
            next.y = output(next.m, next.k, next.l, macro.beta);
            traj.states.push_back(next);
        } catch (const DivergenceError&) {
            traj.divergence = year;
            break;
        }
    }
    return traj;
}

BackwardExtension extend_backward(const EconomyState& anchor, const KernelParams& kernel,
                                  const MacroParams& macro, const AnnualSeries& population,
                                  Year start_year) {
    if (start_year > anchor.year) {
        throw ConfigError("extend_backward: start year is after the anchor year");
    }
    if (auto v = validate_params(kernel); !v) {
        throw ConfigError("invalid kernel parameters: " + v.message());
    }
    if (auto v = validate_macro(macro); !v) {
        throw ConfigError("invalid macro parameters: " + v.message());
    }
    BackwardExtension ext;
    ext.start_m = anchor.m;
    ext.start_k = anchor.k;
    ext.trajectory.horizon = {anchor.year, anchor.year};
    if (start_year == anchor.year) {
        ext.trajectory.states.push_back(anchor);
        return ext;
    }
    const YearRange span{start_year, anchor.year};
    if (auto v = validate_coverage(population, span); !v) {
        throw ConfigError("population coverage: " + v.message());
    }
    const Year steps = anchor.year - start_year;
    constexpr double kRelTol = 1e-6;

    // m: the forward map is continuous and increasing in the starting value.
    if (advance_m(1.0, kernel, steps) > anchor.m * (1.0 + kRelTol)) {
        throw ConfigError("anchor m = " + std::to_string(anchor.m) + " at year " +
                          std::to_string(anchor.year) + " is not reachable from m = 1 at year " +
                          std::to_string(start_year));
    }
    double lo = 1.0;
    double hi = std::max(anchor.m, 1.0);
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (advance_m(mid, kernel, steps) < anchor.m ? lo : hi) = mid;
    }
    const double err_lo = std::abs(advance_m(lo, kernel, steps) - anchor.m);
    const double err_hi = std::abs(advance_m(hi, kernel, steps) - anchor.m);
    const double start_m = err_lo <= err_hi ? lo : hi;
    if (std::min(err_lo, err_hi) > kRelTol * anchor.m) {
        throw ConfigError("extend_backward: could not match anchor m within tolerance");
    }

    // Labor and m paths are fixed; k at the anchor is increasing in the start k.
    std::vector<double> m_path{start_m};
    for (Year i = 0; i < steps; ++i) {
        m_path.push_back(m_path.back() + expected_increment(m_path.back(), kernel));
    }
    const auto labor = population_path(population, span);
    const auto k_at_anchor = [&](double k0) {
        double k = k0;
        for (std::size_t i = 0; i + 1 < m_path.size(); ++i) {
            k = capital_step(
                m_path[i] * std::pow(k, macro.beta) * std::pow(labor[i], 1.0 - macro.beta),
                             k, macro);
        }
        return k;
    };
    double k_lo = anchor.k * 1e-30;
    if (k_at_anchor(k_lo) > anchor.k) {
        throw ConfigError("anchor capital is below the level reachable from year " +
                          std::to_string(start_year));
    }
    double k_hi = anchor.k;
    while (k_at_anchor(k_hi) < anchor.k) {
        k_hi *= 1e3;
        if (!std::isfinite(k_hi) || !std::isfinite(k_at_anchor(k_hi))) {
            throw ConfigError("anchor capital is not reachable from year " +
                              std::to_string(start_year));
        }
    }
    for (int iter = 0; iter < 400 && k_hi - k_lo > 1e-15 * k_hi; ++iter) {
        const double mid = std::sqrt(k_lo) * std::sqrt(k_hi);
        const double probe = (mid > k_lo && mid < k_hi) ? mid : 0.5 * (k_lo + k_hi);
        (k_at_anchor(probe) < anchor.k ? k_lo : k_hi) = probe;
    }
    const double start_k = std::abs(k_at_anchor(k_lo) - anchor.k) <=
                                   std::abs(k_at_anchor(k_hi) - anchor.k)
                               ? k_lo
                               : k_hi;

    auto& traj = ext.trajectory;
    traj.horizon = span;
    traj.states.reserve(static_cast<std::size_t>(span.length()));
    traj.states.push_back(make_state(start_year, start_m, start_k, labor[0], macro.beta));
    for (Year year = start_year + 1; year < anchor.year; ++year) {
        const auto& prev = traj.states.back();
        const auto idx = static_cast<std::size_t>(year - start_year);
        traj.states.push_back(make_state(year, m_path[idx], capital_step(prev.y, prev.k, macro),
                                         labor[idx], macro.beta));
    }
    traj.states.push_back(anchor);
    ext.start_m = start_m;
    ext.start_k = start_k;
    ext.first_capital_decline = first_capital_decline(traj);
    return ext;
}

std::optional<Year> first_capital_decline(const Trajectory& trajectory) {
    const auto& s = trajectory.states;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].k < s[i - 1].k) {
            return s[i].year;
        }
    }
    return std::nullopt;
}

}  // namespace tapgrowth
