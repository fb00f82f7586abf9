#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "tapgrowth/series.hpp"

namespace testing {

inline tapgrowth::AnnualSeries flat_population(tapgrowth::Year first, tapgrowth::Year last,
                                               double value = 1.7e8) {
    return tapgrowth::AnnualSeries("population", "persons", {{first, value}, {last, value}});
}

inline tapgrowth::AnnualSeries sample_population() {
    return tapgrowth::load_series_file(std::filesystem::path(TAPGROWTH_TEST_DATA_DIR) /
                                       "population.csv");
}

inline tapgrowth::AnnualSeries sample_benchmark() {
    return tapgrowth::load_series_file(std::filesystem::path(TAPGROWTH_TEST_DATA_DIR) /
                                       "world_gdp.csv");
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::current_path() / "scratch" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline double relative_error(double a, double b) {
    return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b);
}

}  // namespace testing
