#pragma once

#include <stdexcept>
#include <string>

namespace basket {

// Raised when an iterative numerical routine fails to reach its tolerance
// (continued fraction, quadrature convergence guard, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed or inconsistent run configuration; carries whatever
// location context is available (line for parse errors, key path otherwise).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace basket
