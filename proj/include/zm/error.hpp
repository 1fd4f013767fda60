#pragma once

#include <stdexcept>
#include <string>

namespace zm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive algorithm exhausted its refinement budget. Carries the best
/// estimate reached so callers may still use it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best, double err_est)
      : Error(what), best_(best), err_est_(err_est) {}
  double best() const noexcept { return best_; }
  double err_est() const noexcept { return err_est_; }

 private:
  double best_;
  double err_est_;
};

/// Law with zero (or undefined) standard deviation where a spread is needed.
class DegenerateLawError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A metric or bound precondition on the measure failed, e.g. a moment that
/// should vanish does not.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Moment condition mu_j(M) = 0 violated; `order()` names the first failing j.
class MomentConditionError : public PreconditionError {
 public:
  MomentConditionError(int order, double value)
      : PreconditionError("moment condition violated: mu_" + std::to_string(order) +
                          "(M) = " + std::to_string(value) + " is not zero"),
        order_(order),
        value_(value) {}
  int order() const noexcept { return order_; }
  double value() const noexcept { return value_; }

 private:
  int order_;
  double value_;
};

/// Malformed distribution spec text.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace zm
