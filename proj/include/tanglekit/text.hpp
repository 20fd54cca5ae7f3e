#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "tanglekit/subset.hpp"

namespace tanglekit {

/// Shortest round-trip decimal form; "inf" / "-inf" / "nan" for non-finite values.
inline std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

/// "{a,b,c}" using labels when given, indices otherwise.
inline std::string format_subset(Subset x, const std::vector<std::string>& labels = {}) {
    std::string out = "{";
    bool first = true;
    for (auto i : x.elements()) {
        if (!first) {
            out += ",";
        }
        first = false;
        out += i < labels.size() ? labels[i] : std::to_string(i);
    }
    return out + "}";
}

}  // namespace tanglekit
