#pragma once

#include <stdexcept>
#include <string>

namespace curvelab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Consecutive curve samples coincide (not an immersion at grid scale).
struct DegenerateSegmentError : Error {
  using Error::Error;
};

// Input curve or state violates a documented precondition.
struct AdmissibilityError : Error {
  using Error::Error;
};

// Two discrete objects that must share a grid do not.
struct GridMismatchError : Error {
  using Error::Error;
};

struct LengthMismatchError : Error {
  using Error::Error;
};

struct ParameterOutOfRangeError : Error {
  using Error::Error;
};

// LP solver could not certify optimality (infeasible pivot state or
// duality gap above tolerance).
struct LpNumericalError : Error {
  using Error::Error;
};

struct BlocksDoNotFitError : Error {
  using Error::Error;
};

struct WindowsOverlapError : Error {
  using Error::Error;
};

struct TurningNumberError : Error {
  using Error::Error;
};

struct NotFoundError : Error {
  using Error::Error;
};

// Backtracking line search could not find a descent step above the
// numerical floor; the message carries the stalled state's summary.
struct LineSearchStallError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// Serialized input is not a well-formed document of the declared format.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace curvelab
