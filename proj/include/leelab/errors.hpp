#ifndef LEELAB_ERRORS_HPP
#define LEELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace leelab {

// Bad configuration or unsupported request. CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (divergent integral domain, failed solve, exceeded search
// floor). CLI maps this to exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Basis dimension above the configured limit.
struct capacity_error : config_error {
    explicit capacity_error(const std::string& msg) : config_error(msg) {}
};

} // namespace leelab

#endif
