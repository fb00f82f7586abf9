#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tapgrowth/verdict.hpp"

namespace tapgrowth {

// Astronomical year numbering: 1 is AD 1, 0 is 1 BC, -349 is 350 BC.
using Year = std::int64_t;

// Inclusive year range; empty when last < first.
struct YearRange {
    Year first = 0;
    Year last = -1;

    bool empty() const noexcept { return last < first; }
    Year length() const noexcept { return empty() ? 0 : last - first + 1; }
    bool contains(Year y) const noexcept { return y >= first && y <= last; }
    bool operator==(const YearRange&) const = default;
};

struct Checkpoint {
    Year year = 0;
    double value = 0.0;
    bool operator==(const Checkpoint&) const = default;
};

// Sparse annual data with strictly increasing years and positive values.
class AnnualSeries {
public:
    // Throws DataError naming the violated invariant.
    AnnualSeries(std::string label, std::string units, std::vector<Checkpoint> checkpoints);

    const std::string& label() const noexcept { return label_; }
    const std::string& units() const noexcept { return units_; }
    const std::vector<Checkpoint>& checkpoints() const noexcept { return checkpoints_; }
    YearRange coverage() const noexcept {
        return {checkpoints_.front().year, checkpoints_.back().year};
    }

    // Copy with a flat checkpoint appended at `year` when coverage ends earlier.
    AnnualSeries extended_flat_to(Year year) const;

private:
    std::string label_;
    std::string units_;
    std::vector<Checkpoint> checkpoints_;
};

// CSV with header `year,population` or `year,gdp`; '#' starts a comment line and
// an optional `# units: <text>` comment sets the units.
AnnualSeries load_series(std::istream& in);
AnnualSeries load_series_file(const std::filesystem::path& path);

void write_series(std::ostream& out, const AnnualSeries& series);

// Log-linear interpolation; exact at checkpoints. Throws std::out_of_range
// outside coverage.
double interpolate(const AnnualSeries& series, Year year);

Verdict validate_coverage(const AnnualSeries& series, YearRange horizon);

}  // namespace tapgrowth
