#pragma once

#include <stdexcept>
#include <string>

namespace biostab {

/// Invalid parameter, unknown key or malformed configuration value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver (shooting, root bracketing, Newton) did not converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// f(R) = max Re(gamma) has no sign change inside the (expanded) bracket.
class NoNeutralPointError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

/// Linear algebra failure (singular factorization, eigensolver breakdown).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace biostab
