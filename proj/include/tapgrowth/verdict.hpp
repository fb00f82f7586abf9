#pragma once

#include <string>
#include <vector>

namespace tapgrowth {

// Accumulated constraint violations; empty means accepted.
struct Verdict {
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
    explicit operator bool() const noexcept { return ok(); }
    std::string message() const;
};

}  // namespace tapgrowth
