#pragma once

#include <stdexcept>
#include <string>

namespace mixfit {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A distribution parameter violates its domain (sigma2 <= 0, lambda <= 0, ...).
struct InvalidParameterError : Error {
    using Error::Error;
};

/// Observation / parameter dimensions do not agree.
struct DimensionMismatchError : Error {
    using Error::Error;
};

/// A covariance matrix could not be factorized even after regularization.
struct NotPositiveDefiniteError : Error {
    using Error::Error;
};

/// A component's total responsibility mass collapsed below the usable threshold.
struct DegenerateComponentError : Error {
    DegenerateComponentError(int component, const std::string& what)
        : Error(what), component_index(component) {}
    int component_index;
};

/// Data has zero spread where a positive range is required.
struct ZeroRangeError : Error {
    using Error::Error;
};

/// An observation lies outside a distribution's support (negative count, ...).
struct DomainError : Error {
    using Error::Error;
};

/// The observed-data log-likelihood is NaN or infinite (bad observations).
struct NonFiniteLikelihoodError : Error {
    using Error::Error;
};

/// Malformed input file or command-line value.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace mixfit
