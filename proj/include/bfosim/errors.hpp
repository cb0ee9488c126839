#pragma once

#include <stdexcept>
#include <string>

namespace bfosim {

// Invalid or out-of-range configuration value. Message names the field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the physical domain (e.g. position outside the device).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal state violates a model invariant (e.g. effective barrier <= 0).
class StateError : public std::runtime_error {
public:
    explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative solver failed to converge. Carries the last residual.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& msg, double residual)
        : std::runtime_error(msg), last_residual(residual) {}
    double last_residual;
};

// Filesystem / artifact emission failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bfosim
