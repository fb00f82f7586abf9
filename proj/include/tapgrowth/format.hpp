#pragma once

#include <charconv>
#include <string>

namespace tapgrowth {

// Shortest decimal text that reads back to the same double (at most 17
// significant digits).
inline std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

}  // namespace tapgrowth
