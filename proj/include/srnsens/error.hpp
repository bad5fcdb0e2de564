#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace srn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model text could not be parsed or failed semantic validation.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A network or request is structurally invalid (outside of parsing).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Expression evaluation left its domain (division by zero, 0^-1, negative rate, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A path exceeded the per-path step cap.
class StepLimitExceeded : public Error {
 public:
  using Error::Error;
};

/// The requested estimator cannot be used at this parameter value.
class MethodUnusable : public Error {
 public:
  using Error::Error;
};

/// Oracle requested on a network that is not affine in the state.
class NonAffineError : public Error {
 public:
  using Error::Error;
};

/// Truncated state space lost more probability than allowed.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Statistics were requested from too few samples, or a degenerate reference.
class StatisticsError : public Error {
 public:
  using Error::Error;
};

}  // namespace srn
