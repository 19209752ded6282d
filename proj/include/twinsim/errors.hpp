#pragma once

#include <stdexcept>
#include <string>

namespace twinsim {

// Invalid or inconsistent configuration (grid sizes, parameter ranges,
// unknown config keys). CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A measurement could not be performed (e.g. both slits on dark pixels).
struct measurement_error : std::runtime_error {
    explicit measurement_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: factorization breakdown, physicality violation after a
// channel that should preserve it, fit divergence. CLI maps this to exit 3.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace twinsim
