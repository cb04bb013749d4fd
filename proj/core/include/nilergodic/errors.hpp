#pragma once

#include <stdexcept>
#include <string>

namespace nilergodic {

// Exit-code mapping used by the CLI: ConfigError 2, NumericGuardError 3,
// RangeError 4. Everything else is a programming error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands over different groups, or a coordinate vector of the wrong length.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of the operation (p < 1, k = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Orbit or window too short for the requested averages.
class RangeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A cost or accuracy guard refused to run (grid too large, band limit exceeded).
class NumericGuardError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace nilergodic
