#include "tapgrowth/calibration.hpp"

#include "tapgrowth/errors.hpp"
#include "tapgrowth/parallel.hpp"
#include "tapgrowth/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tapgrowth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelParameters with_candidate(const CalibrationSpec& spec, Candidate c) {
    ModelParameters params = spec.fixed;
    params.p = c.p;
    if (spec.m0_bounds) {
        params.m0 = c.m0;
    }
    return params;
}

Candidate from_log(const CalibrationSpec& spec, const std::vector<double>& x) {
    return {std::exp(x[0]), spec.m0_bounds ? std::exp(x[1]) : spec.fixed.m0};
}

std::vector<double> grid_axis(Bounds b, int points) {
    if (points == 1) {
        return {std::sqrt(b.lower * b.upper)};
    }
    std::vector<double> axis;
    const double lo = std::log(b.lower);
    const double hi = std::log(b.upper);
    for (int j = 0; j < points; ++j) {
        axis.push_back(j == points - 1 ? b.upper
                                       : std::exp(lo + (hi - lo) * j / (points - 1)));
    }
    axis.front() = b.lower;
    return axis;
}

CalibrationResult summarize(const CalibrationSpec& spec, std::vector<Evaluation> trace) {
    CalibrationResult result;
    result.loss = kInf;
    std::size_t best = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (std::isinf(trace[i].loss)) {
            ++result.diverged_count;
        }
        if (trace[i].loss < result.loss) {
            result.loss = trace[i].loss;
            best = i;
        }
    }
    result.best = with_candidate(spec, trace.empty() ? Candidate{spec.fixed.p, spec.fixed.m0}
                                                     : trace[best].params);
    result.trace = std::move(trace);
    return result;
}

}  // namespace

void validate_spec(const CalibrationSpec& spec) {
    auto check_bounds = [](Bounds b, const char* name) {
        if (!(b.lower > 0.0 && b.upper >= b.lower && std::isfinite(b.upper))) {
            throw ConfigError(std::string(name) + " bounds must be positive and ordered");
        }
    };
    check_bounds(spec.p_bounds, "p");
    if (spec.m0_bounds) {
        check_bounds(*spec.m0_bounds, "m0");
    }
    if (spec.grid < 1) {
        throw ConfigError("grid must have at least one point per dimension");
    }
    if (spec.refine_iters < 0) {
        throw ConfigError("refine_iters must be non-negative");
    }
    if (spec.horizon.empty() || spec.horizon.first != spec.start_year) {
        throw ConfigError("calibration horizon must start at the start year");
    }
    if (auto v = validate_macro(spec.fixed.macro()); !v) {
        throw ConfigError(v.message());
    }
    if (auto v = validate_coverage(spec.population, spec.horizon); !v) {
        throw ConfigError("population coverage: " + v.message());
    }
    bool any = false;
    for (const auto& c : spec.benchmark.checkpoints()) {
        any = any || spec.horizon.contains(c.year);
    }
    if (!any) {
        throw ConfigError("no benchmark year inside the calibration horizon");
    }
}

double loss_log_rmse(const Trajectory& trajectory, const AnnualSeries& benchmark) {
    double sum = 0.0;
    std::size_t count = 0;
    bool diverged_early = false;
    for (const auto& c : benchmark.checkpoints()) {
        if (!trajectory.horizon.contains(c.year) || trajectory.states.empty() ||
            c.year < trajectory.first_year()) {
            continue;
        }
        if (c.year > trajectory.last_year()) {
            diverged_early = diverged_early || trajectory.diverged();
            continue;
        }
        const auto& state =
            trajectory.states[static_cast<std::size_t>(c.year - trajectory.first_year())];
        const double gap = std::log(state.y) - std::log(c.value);
        sum += gap * gap;
        ++count;
    }
    if (diverged_early) {
        return kInf;
    }
    if (count == 0) {
        throw DataError("no benchmark year is covered by the trajectory");
    }
    return std::sqrt(sum / static_cast<double>(count));
}

Trajectory simulate_candidate(const CalibrationSpec& spec, Candidate candidate) {
    const auto params = with_candidate(spec, candidate);
    const auto start = initial_state(spec.start_year, params.y0, params.m0, params.l0, params.beta);
    return simulate(start, params.kernel(), params.macro(), spec.population, spec.horizon);
}

double evaluate_candidate(const CalibrationSpec& spec, Candidate candidate) {
    const auto params = with_candidate(spec, candidate);
    if (!validate_params(params.kernel()) || !(params.m0 > 0.0)) {
        return kInf;
    }
    const double loss = loss_log_rmse(simulate_candidate(spec, candidate), spec.benchmark);
    return std::isnan(loss) ? kInf : loss;
}

CalibrationResult grid_search(const CalibrationSpec& spec) {
    validate_spec(spec);
    const auto p_axis = grid_axis(spec.p_bounds, spec.grid);
    const auto m_axis = spec.m0_bounds ? grid_axis(*spec.m0_bounds, spec.grid)
                                       : std::vector<double>{spec.fixed.m0};
    std::vector<Evaluation> trace(p_axis.size() * m_axis.size());
    for (std::size_t i = 0; i < p_axis.size(); ++i) {
        for (std::size_t j = 0; j < m_axis.size(); ++j) {
            trace[i * m_axis.size() + j].params = {p_axis[i], m_axis[j]};
        }
    }
    parallel_for(trace.size(), spec.threads,
                 [&](std::size_t i) { trace[i].loss = evaluate_candidate(spec, trace[i].params); });
    return summarize(spec, std::move(trace));
}

CalibrationResult refine(Candidate start, const CalibrationSpec& spec) {
    validate_spec(spec);
    std::vector<double> x0{std::log(start.p)};
    std::vector<double> lower{std::log(spec.p_bounds.lower)};
    std::vector<double> upper{std::log(spec.p_bounds.upper)};
    if (spec.m0_bounds) {
        x0.push_back(std::log(start.m0));
        lower.push_back(std::log(spec.m0_bounds->lower));
        upper.push_back(std::log(spec.m0_bounds->upper));
    }
    for (std::size_t i = 0; i < x0.size(); ++i) {
        if (x0[i] < lower[i] || x0[i] > upper[i]) {
            throw ConfigError("refine: start point outside bounds");
        }
    }
    // Half a grid cell in each direction, or a tenth of the range without a grid.
    std::vector<double> step;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        const double range = upper[i] - lower[i];
        step.push_back(range > 0.0 ? (spec.grid > 1 ? 0.5 * range / (spec.grid - 1) : 0.1 * range)
                                   : 0.0);
    }

    // The start itself goes first so the result is never worse than it, even
    // after the round trip through log space.
    std::vector<Evaluation> trace{{start, evaluate_candidate(spec, start)}};
    auto objective = [&](const std::vector<double>& x) {
        const Candidate c = from_log(spec, x);
        const double loss = evaluate_candidate(spec, c);
        trace.push_back({c, loss});
        return loss;
    };
    SimplexOptions options;
    options.max_iterations = spec.refine_iters;
    options.diameter_tolerance = 1e-6;
    nelder_mead(objective, x0, step, lower, upper, options);
    return summarize(spec, std::move(trace));
}

CalibrationResult calibrate(const CalibrationSpec& spec) {
    auto coarse = grid_search(spec);
    auto fine = refine(coarse.best_candidate(), spec);
    auto trace = std::move(coarse.trace);
    trace.insert(trace.end(), fine.trace.begin(), fine.trace.end());
    auto result = summarize(spec, std::move(trace));

    for (const auto& preset : kPresets) {
        ModelParameters params = spec.fixed;
        params.m0 = preset.m0;
        params.delta = preset.delta;
        params.p = ModelParameters{}.p;
        CalibrationSpec reference = spec;
        reference.fixed = params;
        reference.m0_bounds.reset();
        result.references.push_back(
            {std::string(preset.name), params, evaluate_candidate(reference, {params.p, params.m0})});
    }
    return result;
}

}  // namespace tapgrowth
