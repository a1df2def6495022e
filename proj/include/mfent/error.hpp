#pragma once

#include <stdexcept>
#include <string>

namespace mfent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cluster or run parameter outside its admissible range.
class InvalidCluster : public Error {
 public:
  using Error::Error;
};

/// An argument outside the domain of a mathematical operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Problem size beyond what a routine is built to handle.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerics failed (e.g. eigensolver did not converge).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Two computations that must agree did not; indicates a bug upstream.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace mfent
