#pragma once

#include <stdexcept>
#include <string>

namespace eqa {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad argument: out-of-range index, mismatched dimensions, unsupported order.
struct ArgumentError : Error {
    using Error::Error;
};

/// Evaluation hit a point where an elementary function is undefined
/// (log of a nonpositive value, fractional power of a nonpositive base, ...).
struct DomainError : Error {
    double offending_value = 0.0;
    DomainError(const std::string& msg, double value)
        : Error(msg), offending_value(value) {}
};

/// Division by a jet whose constant term vanishes.
struct SingularPointError : Error {
    using Error::Error;
};

/// dF = 0 where a regular point is required.
struct CriticalPointError : Error {
    using Error::Error;
};

/// |U(F)| below tolerance where a nondegenerate level set is required.
struct DegenerateError : Error {
    using Error::Error;
};

/// A symmetric form failed its invertibility precondition.
struct SingularFormError : Error {
    using Error::Error;
};

/// An affine or fractional-linear map is singular at the requested point.
struct SingularMapError : Error {
    using Error::Error;
};

/// External reparameterization with vanishing derivative at the base value.
struct StationaryReparamError : Error {
    using Error::Error;
};

/// det[A | dA] vanished at a sample: the immersion is not centroaffine there.
struct NonCentroaffineError : Error {
    using Error::Error;
};

/// A calibrated immersion was required but |A dA| varies across samples.
struct CalibrationError : Error {
    using Error::Error;
};

/// Syntax or name-resolution failure while parsing an expression.
/// `offset` is a 0-based byte offset into the source text.
struct ParseError : Error {
    std::size_t offset;
    std::string expected;
    ParseError(const std::string& msg, std::size_t offset, std::string expected = {})
        : Error(msg), offset(offset), expected(std::move(expected)) {}
};

}  // namespace eqa
