#pragma once

#include <vector>

#include "cdboost/losses.hpp"

namespace cdboost::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };
enum class Direction { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status status);

/// optimize c^T x  s.t.  row_k^T x (<=|=|>=) rhs_k,  lower <= x <= upper.
/// Bounds may be infinite in either direction.
struct LinearProgram {
  Direction direction = Direction::Minimize;
  Vector objective;
  Matrix constraints;  // one row per constraint
  Vector rhs;
  std::vector<Sense> senses;
  Vector lower;
  Vector upper;

  /// n variables in [0, +inf), zero objective, no constraints.
  static LinearProgram with_variables(Eigen::Index n, Direction direction = Direction::Minimize);

  Eigen::Index num_variables() const { return objective.size(); }
  Eigen::Index num_constraints() const { return constraints.rows(); }

  void add_constraint(const Vector& row, Sense sense, double value);
  void set_free(Eigen::Index var);
  void set_bounds(Eigen::Index var, double lo, double hi);

  /// DimensionError / DomainError on inconsistent shapes or NaN data.
  void validate() const;
};

struct Outcome {
  Status status = Status::Infeasible;
  Vector x;            // valid when Optimal
  double value = 0.0;  // objective at x when Optimal
  double max_residual = 0.0;  // largest constraint/bound violation at x
  long pivots = 0;
};

struct Tolerances {
  double feasibility = 1e-8;
  double pivot = 1e-10;
  double optimality = 1e-9;
  long max_pivots = 100000;
};

/// Two-phase dense tableau simplex with Bland's rule.
Outcome solve(const LinearProgram& lp, const Tolerances& tol = {});

}  // namespace cdboost::lp
