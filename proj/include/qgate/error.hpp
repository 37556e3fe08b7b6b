#pragma once

#include <stdexcept>
#include <string>

namespace qgate {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or dimensions that do not fit the operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Operation called with a target embedding of the wrong mode.
class ModeError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration values (counts, rates, budgets).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A trajectory produced a non-finite value.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double last_finite_error)
        : Error(what), last_finite_error_(last_finite_error) {}

    double last_finite_error() const noexcept { return last_finite_error_; }

private:
    double last_finite_error_;
};

/// Malformed input file; the message names the offending field.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Loaded data that parses but violates a physical constraint.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace qgate
