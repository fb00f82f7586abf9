#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "tapgrowth/economy.hpp"
#include "tapgrowth/kernel.hpp"

namespace tapgrowth {

// The nine scalars that define a run, at their baseline values.
struct ModelParameters {
    double y0 = 1.82741e11;  // world GDP in the start year
    double m0 = 50.0;        // distinct goods in the start year
    double p = 0.0006;
    double theta = 6.0;
    double rho = 2.0;
    double l0 = 1.7e8;  // world population in the start year
    double beta = 1.0 / 3.0;
    double s = 0.25;
    double delta = 0.06;
    int cutoff = 4;

    KernelParams kernel() const { return {p, {theta, rho, cutoff}}; }
    MacroParams macro() const { return {beta, s, delta}; }
};

struct Preset {
    std::string_view name;
    double m0;
    double delta;
};

// Three published parameterizations of the historical fit.
inline constexpr std::array<Preset, 3> kPresets{{
    {"m50-d006", 50.0, 0.06},
    {"m50-d0", 50.0, 0.0},
    {"m88-d006", 88.0, 0.06},
}};

inline std::optional<ModelParameters> preset_parameters(std::string_view name) {
    for (const auto& preset : kPresets) {
        if (preset.name == name) {
            ModelParameters params;
            params.m0 = preset.m0;
            params.delta = preset.delta;
            return params;
        }
    }
    return std::nullopt;
}

}  // namespace tapgrowth
