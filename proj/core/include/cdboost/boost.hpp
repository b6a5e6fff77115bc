#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "cdboost/instance.hpp"
#include "cdboost/linesearch.hpp"
#include "cdboost/losses.hpp"

namespace cdboost {

/// Primal iterate together with everything derived from it. Built only by
/// make_state, so margins are always A * lambda recomputed from scratch.
struct IterateState {
  Vector lambda;
  Vector margins;       // A lambda
  double objective = 0.0;  // f(A lambda)
  Vector dual_weights;  // grad f(A lambda), strictly positive
  Vector grad;          // A^T grad f(A lambda)
  long t = 0;

  double grad_inf_norm() const { return grad.lpNorm<Eigen::Infinity>(); }
};

IterateState make_state(const BoostInstance& inst, const Risk& risk, Vector lambda, long t = 0);

/// Coordinate j and direction sign; the step is lambda_j += alpha * sign.
struct CoordinateChoice {
  Eigen::Index j = 0;
  int sign = 1;
};

/// Exact argmax (c0 = 1) or a c0-approximate choice. A custom chooser stands
/// in for an imperfect weak-learning oracle; its answers are checked against
/// -sign * grad_j >= c0 * ||grad||_inf.
struct Selector {
  double c0 = 1.0;
  std::function<CoordinateChoice(const Vector& grad)> custom;

  static Selector best() { return {}; }
  static Selector approx(double c0, std::function<CoordinateChoice(const Vector&)> chooser = {});
};

/// Argmax of |grad_j| (lowest index on ties) with the sign making the step a
/// descent direction. std::nullopt when the gradient is exactly zero.
std::optional<CoordinateChoice> select_coordinate(const Vector& grad,
                                                  const Selector& selector = {});

struct ClosedFormStep {};
struct ExactStep {
  double tol = 1e-12;
};
using LineSearch = std::variant<WolfeParams, ClosedFormStep, ExactStep>;

struct RunConfig {
  double grad_tol = 1e-10;
  long max_iters = 1000;
  std::optional<double> target;
  Selector selector;
  LineSearch line_search = WolfeParams{};

  void validate() const;
};

struct TraceRecord {
  long t = 0;
  double objective = 0.0;  // f(A lambda_t), after the step
  double grad_inf = 0.0;   // ||A^T grad f(A lambda_{t-1})||_inf, used to pick j
  Eigen::Index j = 0;
  int sign = 1;
  double alpha = 0.0;
  double wall_time = 0.0;  // seconds since the start of the run
  Vector lambda;           // lambda_t
};

enum class TerminalStatus { GradientBelowTol, MaxIters, TargetReached };

const char* to_string(TerminalStatus status);

struct Trace {
  double initial_objective = 0.0;
  std::vector<TraceRecord> records;
  TerminalStatus status = TerminalStatus::MaxIters;
  IterateState final_state;
};

struct BoostStep {
  IterateState state;
  CoordinateChoice choice;
  StepResult step;
};

/// One iteration: select, search along +-e_j, update one coordinate.
/// PreconditionError when ||grad||_inf <= cfg.grad_tol.
BoostStep boost_step(const BoostInstance& inst, const Risk& risk, const IterateState& state,
                     const RunConfig& cfg);

/// l1 steepest descent of f o A from lambda_0 = 0 until the gradient norm
/// drops to grad_tol, the optional target objective is reached, or
/// max_iters steps have been taken.
Trace run(const BoostInstance& inst, const Loss& loss, const RunConfig& cfg);

}  // namespace cdboost
