#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spillover {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the first error.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Unbound name or a domain error (log of a non-positive value, division by zero, ...).
class EvalError : public Error {
public:
    using Error::Error;
};

/// Unknown family, missing or out-of-range parameter, schema violation in a config.
class SpecError : public Error {
public:
    using Error::Error;
};

/// The contest violates one of the standing assumptions.
class AssumptionError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not produce a result (non-finite values, no convergence, ...).
class SolverError : public Error {
public:
    using Error::Error;
};

/// The raw cumulative never reaches one on the grid; the grid must be extended.
class HorizonError : public SolverError {
public:
    using SolverError::SolverError;
};

}  // namespace spillover
