#pragma once

#include <stdexcept>
#include <string>

namespace speclab {

// Invalid user input (config keys, parameter ranges, shape mismatches).
// `key_path` names the offending field when the error comes from a config,
// e.g. "bounds.p".
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& msg, std::string key = {})
        : std::invalid_argument(msg), key_path_(std::move(key)) {}

    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

// Numerical failure at runtime (non-convergence, loss of precision).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The spectral parameter collided with an eigenvalue of the discrete
// Laplacian; carries the offending multiplier value.
class singular_resolvent_error : public numerical_error {
public:
    singular_resolvent_error(const std::string& msg, double mu)
        : numerical_error(msg), mu_(mu) {}

    double offending_multiplier() const noexcept { return mu_; }

private:
    double mu_;
};

} // namespace speclab
