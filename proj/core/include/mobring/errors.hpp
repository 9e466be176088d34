#pragma once

#include <stdexcept>
#include <string>

namespace mobring {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid ring/system/run configuration (odd N, |delta| > 1, unknown key, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed numerical input, e.g. a non-Hermitian matrix handed to the
/// Hermitian eigensolver.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Integrator or iterative solver failed (NaN, stability guard, iteration cap).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A perturbative denominator fell below the resonance guard.
class DegenerateInputError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Closed-form time integral over a non-decaying exponential.
class DivergentIntegralError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Input outside a function's mathematical domain (log of a nonpositive value).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace mobring
