#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tapgrowth/config.hpp"
#include "tapgrowth/economy.hpp"

namespace tapgrowth {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitData = 3,
    kExitDivergence = 4,
};

inline constexpr int kSchemaVersion = 1;

// Each command writes its files under config.out and reports on `out`/`err`.
// Config problems return 2, data problems 3, unallowed divergence 4.
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_calibrate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_ensemble(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_analyze(const RunConfig& config, const std::filesystem::path& trajectory,
                std::ostream& out, std::ostream& err);

// Plain-text analysis used by `analyze`: takeoff year, doubling times of Y by
// era, blow-up estimate from the final state and any capital decline.
std::string analyze_report(const Trajectory& trajectory, const RunConfig& config);

// Full command line: `tapgrowth simulate|calibrate|ensemble|analyze [options]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tapgrowth
