#pragma once

#include <stdexcept>
#include <string>

namespace holoproj {

/// Operand shapes disagree (non-square matrix, mismatched n, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of the operation (zero vector, too few samples, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested affine chart has a vanishing pivot component.
class ChartError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Chart coordinates too large for stable finite differences.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field evaluated to a non-finite value inside a stencil.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time stepping failed; carries the time at which it happened.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Bisection bracket does not straddle a regime change.
class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation's precondition was checked numerically and failed.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input (config, matrix literal, CLI flag).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace holoproj
