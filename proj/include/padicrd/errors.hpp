#pragma once

#include <stdexcept>
#include <string>

namespace padicrd {

// Base of every error raised by the library. The CLI maps the subclasses
// onto stable exit codes (ConfigError -> 2, NumericalError -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A code is too short for the requested ball level or fraction.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// Malformed input documents, graphs, expressions and run configurations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Blow-up, NaN/Inf, Newton or Picard non-convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace padicrd
