#pragma once

#include <filesystem>
#include <iosfwd>

#include "tapgrowth/economy.hpp"

namespace tapgrowth {

// `year,M,K,L,Y`, one row per stored year, shortest round-trip decimals.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

// Reads the format above. The result has no divergence marker and a
// deterministic mode tag. Throws ParseError on malformed input.
Trajectory read_trajectory_csv(std::istream& in);
Trajectory read_trajectory_file(const std::filesystem::path& path);

}  // namespace tapgrowth
