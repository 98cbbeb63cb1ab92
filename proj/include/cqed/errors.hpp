#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

// Each error class maps to one CLI exit code (see tools/cqedsim.cpp).

/// Malformed or inconsistent configuration document.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A detuning that appears in a denominator is zero.
class SingularDetuning : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Time integration failed or violated a conservation tolerance.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical self-consistency check failed (generator identity, scan bracketing, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cqed
