#pragma once

#include <stdexcept>
#include <string>

namespace systolic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degenerate or otherwise unusable lattice basis.
class InvalidLattice : public Error {
 public:
  using Error::Error;
};

/// A conformal factor that is not strictly positive (or not finite).
class InvalidFactor : public Error {
 public:
  using Error::Error;
};

/// Two evaluation routes of the same quantity disagree beyond tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Shortest-path search kept touching the strip boundary after widening.
class StripExhausted : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain where a closed-form solution is defined.
class InvalidDomain : public Error {
 public:
  using Error::Error;
};

/// Too few samples to evaluate a finite-difference check.
class InsufficientResolution : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed grid file or configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace systolic
