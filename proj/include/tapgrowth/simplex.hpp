#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace tapgrowth {

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

struct SimplexOptions {
    int max_iterations = 200;
    double diameter_tolerance = 1e-6;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

// Downhill simplex minimisation of f inside the box [lower, upper]; trial
// points are clamped to the box. Stops after max_iterations or once every
// vertex lies within diameter_tolerance (max-norm) of the best one. The
// returned point is the best vertex ever evaluated, so its value never exceeds
// f(x0).
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x0, const std::vector<double>& step,
                                 const std::vector<double>& lower,
                                 const std::vector<double>& upper, SimplexOptions options = {}) {
    const std::size_t n = x0.size();
    auto clamp = [&](std::vector<double> x) {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::clamp(x[i], lower[i], upper[i]);
        }
        return x;
    };
    auto eval = [&](const std::vector<double>& x) {
        const double v = f(x);
        return std::isnan(v) ? INFINITY : v;
    };

    std::vector<std::vector<double>> vertex(n + 1, clamp(x0));
    std::vector<double> value(n + 1);
    value[0] = eval(vertex[0]);
    for (std::size_t j = 0; j < n; ++j) {
        auto& v = vertex[j + 1];
        const double up = v[j] + step[j];
        v[j] = up <= upper[j] ? up : v[j] - step[j];
        v = clamp(v);
        value[j + 1] = eval(v);
    }

    std::vector<std::size_t> order(n + 1);
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
        std::vector<std::vector<double>> v2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            v2[k] = vertex[order[k]];
            f2[k] = value[order[k]];
        }
        vertex.swap(v2);
        value.swap(f2);
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                d = std::max(d, std::abs(vertex[k][i] - vertex[0][i]));
            }
        }
        return d;
    };
    auto along = [&](const std::vector<double>& from, const std::vector<double>& to, double t) {
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = from[i] + t * (to[i] - from[i]);
        }
        return clamp(std::move(p));
    };

    int iter = 0;
    sort_vertices();
    while (iter < options.max_iterations && diameter() >= options.diameter_tolerance) {
        ++iter;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                centroid[i] += vertex[k][i] / static_cast<double>(n);
            }
        }
        const auto& worst = vertex[n];
        const auto reflected = along(centroid, worst, -options.reflection);
        const double f_reflected = eval(reflected);

        if (f_reflected < value[0]) {
            const auto expanded = along(centroid, worst, -options.reflection * options.expansion);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                vertex[n] = expanded;
                value[n] = f_expanded;
            } else {
                vertex[n] = reflected;
                value[n] = f_reflected;
            }
        } else if (f_reflected < value[n - 1]) {
            vertex[n] = reflected;
            value[n] = f_reflected;
        } else {
            const bool outside = f_reflected < value[n];
            const auto contracted = outside
                                        ? along(centroid, reflected, options.contraction)
                                        : along(centroid, worst, options.contraction);
            const double f_contracted = eval(contracted);
            if (f_contracted < std::min(f_reflected, value[n])) {
                vertex[n] = contracted;
                value[n] = f_contracted;
            } else {
                for (std::size_t k = 1; k <= n; ++k) {
                    vertex[k] = along(vertex[0], vertex[k], options.shrink);
                    value[k] = eval(vertex[k]);
                }
            }
        }
        sort_vertices();
    }
    return {vertex[0], value[0], iter};
}

}  // namespace tapgrowth
