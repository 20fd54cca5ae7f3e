#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tanglekit {

/// Malformed or unreadable input (files, serialized formats).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Refusal to start an exhaustive computation above its size cap.
class SizeCapError : public std::length_error {
public:
    SizeCapError(std::string cap_name, std::size_t limit, std::size_t actual)
        : std::length_error(cap_name + ": universe size " + std::to_string(actual) +
                            " exceeds cap " + std::to_string(limit)),
          cap_name_{std::move(cap_name)},
          limit_{limit},
          actual_{actual} {}

    [[nodiscard]] const std::string& cap_name() const { return cap_name_; }
    [[nodiscard]] std::size_t limit() const { return limit_; }
    [[nodiscard]] std::size_t actual() const { return actual_; }

private:
    std::string cap_name_;
    std::size_t limit_;
    std::size_t actual_;
};

inline void enforce_cap(const char* cap_name, std::size_t limit, std::size_t actual) {
    if (actual > limit) {
        throw SizeCapError(cap_name, limit, actual);
    }
}

}  // namespace tanglekit
