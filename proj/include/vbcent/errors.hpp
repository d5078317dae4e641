#pragma once

#include <stdexcept>
#include <string>

namespace vbcent {

// Bad input: malformed files, out-of-range ids, invalid configuration.
// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: non-convergence, divergence, singular systems.
// The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace vbcent
