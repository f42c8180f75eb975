#pragma once

#include <stdexcept>
#include <string>

namespace l1codec {

// Common base so callers can catch everything from this library at once.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent or invalid matrix/vector dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A matrix that must have full (column) rank does not.
class RankError : public Error {
 public:
  using Error::Error;
};

// A linear system whose matrix is singular to working precision.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// A scalar argument outside the domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Exhaustive subset enumeration would exceed the configured cap.
class EnumerationCapError : public Error {
 public:
  using Error::Error;
};

// Exhaustive sparse search found no support that fits the data.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

// Root bracketing failed (no sign change over the search interval).
class BracketError : public Error {
 public:
  using Error::Error;
};

// File read/write/parse failure; message carries the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace l1codec
