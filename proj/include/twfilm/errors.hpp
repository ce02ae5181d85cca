#pragma once

#include <stdexcept>
#include <string>

namespace twfilm {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// The isotherm lacks a hypothesis required by the requested construction.
struct ComplianceError : Error {
    using Error::Error;
};

/// No sign change over the supplied interval.
struct NoBracketError : Error {
    using Error::Error;
};

/// Adaptive quadrature exhausted its recursion depth (likely a
/// non-integrable singularity).
struct QuadDepthError : Error {
    using Error::Error;
};

/// An iteration failed to converge or to classify within its span.
struct ConvergenceError : Error {
    using Error::Error;
};

/// File parsing failure; `line` is 1-based when known, 0 otherwise.
struct ParseError : Error {
    int line = 0;
    ParseError(const std::string& msg, int line_number)
        : Error(msg), line(line_number) {}
};

/// Loaded or constructed data violates a structural invariant.
struct InvariantError : Error {
    using Error::Error;
};

}  // namespace twfilm
