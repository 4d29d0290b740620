#pragma once

#include <stdexcept>
#include <string>

namespace ward {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expression or spec-file text rejected by a parser.
struct SyntaxError : Error { using Error::Error; };

// File could not be opened, read, or written.
struct IOError : Error { using Error::Error; };

// Spec/record JSON is well-formed but structurally invalid.
struct SchemaError : Error { using Error::Error; };

// Evaluation at (or within the mask of) a denominator zero.
struct PoleHit : Error { using Error::Error; };

// Spectral-parameter evaluation too close to a factor pole.
struct NearPole : Error { using Error::Error; };

// A span construction received only (numerically) zero vectors.
struct ZeroSpan : Error { using Error::Error; };

// Matrix inversion requested for a numerically singular matrix.
struct Singular : Error { using Error::Error; };

// A jet expected to be holomorphic has non-negligible principal part.
struct NotHolomorphic : Error { using Error::Error; };

// New pole coincides with (or is conjugate to) an existing one.
struct PoleClash : Error { using Error::Error; };

// Two poles in a construction are equal or mutually conjugate.
struct ForbiddenPolePair : Error { using Error::Error; };

// A construction degenerates at a point (rank drop, identity factor, ...).
struct Degenerate : Error { using Error::Error; };

// A chain's rank pattern collapses (projector 0 or full, empty level).
struct RankCollapse : Error { using Error::Error; };

// A derivative-membership condition of a stationary chain fails.
struct ConstraintViolated : Error { using Error::Error; };

// A factor chain violates the consecutive-factor minimality condition.
struct MinimalityViolated : Error { using Error::Error; };

// Stationary chain ranks fail the strict-decrease law.
struct StrictDecreaseViolated : Error { using Error::Error; };

// A field does not decay toward a constant at spatial infinity.
struct NonDecaying : Error { using Error::Error; };

// Derivative or jet order beyond the supported cap.
struct OrderOverflow : Error { using Error::Error; };

}  // namespace ward
