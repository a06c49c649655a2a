#pragma once

#include <stdexcept>
#include <string>

namespace rhomap {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An evaluation point lies outside the valid domain (metric table range,
/// profile domain, annulus, ...).
struct OutOfDomain : Error {
  using Error::Error;
};

/// A quantity that must be strictly positive is not (metric values,
/// weights, radii, table entries).
struct NonPositiveValue : Error {
  using Error::Error;
};

/// Malformed input that cannot be interpreted (metric strings, CSV files,
/// inconsistent sample arrays).
struct ParseFailure : Error {
  using Error::Error;
};

/// An integrand evaluated to NaN or +/-inf at a quadrature node.
struct NonFiniteIntegrand : Error {
  using Error::Error;
};

/// The combined-energy parameter lies strictly below the admissible range,
/// so sqrt(w(s) + alpha) is imaginary on part of the domain.
struct SingularIntegrand : Error {
  using Error::Error;
};

/// The requested annulus pair violates the feasibility bound.
struct InfeasibleInstance : Error {
  using Error::Error;
};

/// Root bracketing failed (no sign change found within the iteration cap).
struct BracketFailure : Error {
  using Error::Error;
};

/// Profile samples are not strictly monotone where they must be.
struct NonMonotoneProfile : Error {
  using Error::Error;
};

/// A polar grid is too coarse or violates its structural invariants.
struct DegenerateGrid : Error {
  using Error::Error;
};

/// The power-law closed forms are undefined for exponent lambda = 1.
struct LambdaOne : Error {
  using Error::Error;
};

}  // namespace rhomap
