#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace cdboost {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (non-finite
/// input, point outside dom(g*), non-positive objective, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector/matrix dimensions do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural requirement (entry range, labels).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an algorithm does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine exhausted its budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}
  explicit ConvergenceError(const std::string& what) : Error(what) {}

  /// Last interval examined (NaN when not applicable).
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_ = std::numeric_limits<double>::quiet_NaN();
  double hi_ = std::numeric_limits<double>::quiet_NaN();
};

/// Internal consistency check failed, usually a numerical tolerance problem.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdboost
