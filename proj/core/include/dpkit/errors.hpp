#pragma once

#include <stdexcept>
#include <string>

namespace dpkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: empty meshes, mismatched meshes, out-of-range parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A formula was evaluated outside its domain (e.g. the critical exponent for p >= N).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed: bisection cap, Newton stagnation, singular Jacobian.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A structural hypothesis required by an algorithm does not hold (e.g. a non-positive margin).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpkit
