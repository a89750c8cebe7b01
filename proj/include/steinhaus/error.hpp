#pragma once

#include <stdexcept>
#include <string>

namespace steinhaus {

// All library failures derive from Error; the CLI maps them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(int a, int b)
      : Error("dimension mismatch: " + std::to_string(a) + " vs " +
              std::to_string(b)) {}
};

// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A computation that is guaranteed to succeed in exact arithmetic did not.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Resource bounds (interval blowup, grid memory cap).
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace steinhaus
