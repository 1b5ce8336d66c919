#pragma once

#include <stdexcept>
#include <string>

namespace augmentor {

// Bad data, degenerate inputs, failed preconditions. CLI maps this to exit 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed invocations (bad flag values, missing files named on the command
// line). CLI maps this to exit 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace augmentor
