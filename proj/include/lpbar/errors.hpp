#pragma once

#include <stdexcept>
#include <string>

namespace lpbar {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Problem text is not syntactically valid (bad JSON, wrong field type).
struct MalformedInput : Error {
    using Error::Error;
};

/// Array lengths in a problem file are inconsistent.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// A structural constraint on the data is violated (b < 0, asymmetric Q, ...).
struct InvariantViolation : Error {
    using Error::Error;
};

/// A point lies outside the domain required by the operation.
struct DomainError : Error {
    using Error::Error;
};

/// Newton start point is not inside the feasible domain.
struct InfeasibleStart : Error {
    using Error::Error;
};

/// Integrand does not decay before the truncation search gives up.
struct NonDecayingTail : Error {
    using Error::Error;
};

/// Adaptive quadrature exceeded its maximum subdivision depth.
struct DepthExceeded : Error {
    using Error::Error;
};

/// Grid does not contain the decaying part of the integrand.
struct GridTooSmall : Error {
    using Error::Error;
};

/// Instance exceeds the size cap of an exhaustive oracle.
struct TooLarge : Error {
    using Error::Error;
};

/// Grid-search optimum landed on the user-supplied box boundary.
struct OptimumOnBoundary : Error {
    using Error::Error;
};

} // namespace lpbar
