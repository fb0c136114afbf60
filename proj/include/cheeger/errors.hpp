#pragma once

#include <stdexcept>
#include <string>

namespace cheeger {

/// The input file could not be read or tokenized.
class GraphParseError : public std::runtime_error {
 public:
  GraphParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The graph parsed fine but violates the unit-degree symmetric model.
class GraphValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration or dense construction refused for size reasons.
class InstanceTooLarge : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what + " (best residual " + std::to_string(best_residual) + ")"),
        best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// Internal consistency check failed; indicates a bug, not bad data.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cheeger
