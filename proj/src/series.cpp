#include "tapgrowth/series.hpp"

#include "tapgrowth/errors.hpp"
#include "tapgrowth/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>

namespace tapgrowth {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto* end = text.data() + text.size();
    const auto result = std::from_chars(text.data(), end, value);
    return result.ec == std::errc() && result.ptr == end && !text.empty();
}

}  // namespace

AnnualSeries::AnnualSeries(std::string label, std::string units,
                           std::vector<Checkpoint> checkpoints)
    : label_(std::move(label)), units_(std::move(units)), checkpoints_(std::move(checkpoints)) {
    if (checkpoints_.size() < 2) {
        throw DataError("series '" + label_ + "' needs at least 2 checkpoints");
    }
    for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
        const auto& c = checkpoints_[i];
        if (!(c.value > 0.0) || !std::isfinite(c.value)) {
            throw DataError("series '" + label_ + "': value at year " + std::to_string(c.year) +
                            " must be positive and finite");
        }
        if (i > 0 && c.year <= checkpoints_[i - 1].year) {
            throw DataError("series '" + label_ + "': years must be strictly increasing (" +
                            std::to_string(checkpoints_[i - 1].year) + " then " +
                            std::to_string(c.year) + ")");
        }
    }
}

AnnualSeries AnnualSeries::extended_flat_to(Year year) const {
    if (year <= checkpoints_.back().year) {
        return *this;
    }
    auto extended = checkpoints_;
    extended.push_back({year, checkpoints_.back().value});
    return AnnualSeries(label_, units_, std::move(extended));
}

AnnualSeries load_series(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::string label;
    std::string units;
    bool have_header = false;
    std::vector<Checkpoint> rows;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) {
            continue;
        }
        if (text.front() == '#') {
            auto body = trim(text.substr(1));
            constexpr std::string_view key = "units:";
            if (body.substr(0, key.size()) == key) {
                units = std::string(trim(body.substr(key.size())));
            }
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError(line_no, "expected exactly two comma-separated fields");
        }
        const auto first = trim(text.substr(0, comma));
        const auto second = trim(text.substr(comma + 1));
        if (!have_header) {
            if (first != "year" || (second != "population" && second != "gdp")) {
                throw ParseError(line_no, "header must be 'year,population' or 'year,gdp'");
            }
            label = std::string(second);
            have_header = true;
            continue;
        }
        Checkpoint row;
        if (!parse_number(first, row.year)) {
            throw ParseError(line_no, "year is not an integer: '" + std::string(first) + "'");
        }
        if (!parse_number(second, row.value) || !std::isfinite(row.value)) {
            throw ParseError(line_no, "value is not a number: '" + std::string(second) + "'");
        }
        if (!(row.value > 0.0)) {
            throw ParseError(line_no, "value must be positive (got " + std::string(second) + ")");
        }
        if (!rows.empty()) {
            if (row.year == rows.back().year) {
                throw ParseError(line_no, "duplicate year " + std::to_string(row.year));
            }
            if (row.year < rows.back().year) {
                throw ParseError(line_no, "years must be sorted ascending");
            }
        }
        rows.push_back(row);
    }
    if (!have_header) {
        throw ParseError(line_no, "missing header");
    }
    return AnnualSeries(std::move(label), std::move(units), std::move(rows));
}

AnnualSeries load_series_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    try {
        return load_series(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_series(std::ostream& out, const AnnualSeries& series) {
    if (!series.units().empty()) {
        out << "# units: " << series.units() << '\n';
    }
    out << "year," << series.label() << '\n';
    for (const auto& c : series.checkpoints()) {
        out << c.year << ',' << format_double(c.value) << '\n';
    }
}

double interpolate(const AnnualSeries& series, Year year) {
    const auto& pts = series.checkpoints();
    if (year < pts.front().year || year > pts.back().year) {
        throw std::out_of_range("year " + std::to_string(year) + " outside series '" +
                                series.label() + "' coverage [" +
                                std::to_string(pts.front().year) + ", " +
                                std::to_string(pts.back().year) + "]");
    }
    const auto upper = std::lower_bound(pts.begin(), pts.end(), year,
                                        [](const Checkpoint& c, Year y) { return c.year < y; });
    if (upper->year == year) {
        return upper->value;
    }
    const auto lower = upper - 1;
    const double fraction = static_cast<double>(year - lower->year) /
                            static_cast<double>(upper->year - lower->year);
    return lower->value * std::pow(upper->value / lower->value, fraction);
}

Verdict validate_coverage(const AnnualSeries& series, YearRange horizon) {
    Verdict verdict;
    if (horizon.empty()) {
        return verdict;
    }
    const auto cover = series.coverage();
    if (horizon.first < cover.first) {
        verdict.violations.push_back("series '" + series.label() + "' missing years [" +
                                     std::to_string(horizon.first) + ", " +
                                     std::to_string(std::min(horizon.last, cover.first - 1)) +
                                     "]");
    }
    if (horizon.last > cover.last) {
        verdict.violations.push_back("series '" + series.label() + "' missing years [" +
                                     std::to_string(std::max(horizon.first, cover.last + 1)) +
                                     ", " + std::to_string(horizon.last) + "]");
    }
    return verdict;
}

}  // namespace tapgrowth
