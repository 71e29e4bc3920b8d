#pragma once

#include <stdexcept>
#include <string>

namespace cca {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Shapes or dimensions of the inputs do not match.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on the input was violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A brute-force enumeration or state space exceeds its configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A kernel produced probabilities that are not mutually consistent.
class KernelInconsistency : public Error {
 public:
  using Error::Error;
};

/// The requested computation is not available for this input family.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// An index m is outside the density sets required by a construction.
class IneligibleError : public Error {
 public:
  using Error::Error;
};

/// A family of index sets failed the H1-H3 validator.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration. Carries the offending line when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace cca
