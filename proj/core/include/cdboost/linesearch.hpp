#pragma once

#include <functional>

namespace cdboost {

/// Value and directional derivative of a one-dimensional restriction
/// phi(alpha) = h(x + alpha v).
struct LinePoint {
  double value;
  double slope;
};

using LineFunction = std::function<LinePoint(double)>;

/// Constants of the two Wolfe conditions plus iteration budgets.
struct WolfeParams {
  double c1 = 1.0 / 3.0;
  double c2 = 0.5;
  int max_bracket_doublings = 200;
  int max_bisections = 200;

  /// Throws PreconditionError unless 0 < c1 < c2 < 1 and budgets are positive.
  void validate() const;
};

enum class StepMode { Wolfe, ClosedForm, Exact };

struct StepResult {
  double alpha = 0.0;
  int evals = 0;
  StepMode mode = StepMode::Wolfe;
};

/// Bracketing and bisecting search. Doubles alpha_max from 1 while the
/// sufficient-decrease condition holds, then bisects [0, alpha_max] until
///   phi(alpha)  <= phi(0) + alpha c1 phi'(0)   and
///   phi'(alpha) >= c2 phi'(0).
/// No interpolation: convexity makes the acceptable set a closed interval
/// that bisection never discards.
///
/// Throws PreconditionError if phi'(0) >= 0 and ConvergenceError (carrying
/// the last interval) if either budget runs out.
StepResult wolfe_search(const LineFunction& phi, const WolfeParams& params = {});

/// Minimizer of the quadratic upper bound f - alpha |g| + alpha^2 eta f / 2,
/// i.e. grad_inf_norm / (eta * objective).
double closed_form_step(double grad_inf_norm, double objective, double eta);

/// Root of phi' by doubling then bisection, to |phi'(alpha)| <= tol.
/// Throws ConvergenceError("infimum not attained along ray") when phi' does
/// not turn positive within the doubling budget.
StepResult exact_search(const LineFunction& phi, double tol = 1e-12,
                        int max_bracket_doublings = 200, int max_bisections = 400);

}  // namespace cdboost
