#include "cdboost/linesearch.hpp"

#include <cmath>
#include <sstream>

#include "cdboost/errors.hpp"

namespace cdboost {

void WolfeParams::validate() const {
  if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0)) {
    std::ostringstream msg;
    msg << "wolfe: need 0 < c1 < c2 < 1, got c1=" << c1 << " c2=" << c2;
    throw PreconditionError(msg.str());
  }
  if (max_bracket_doublings <= 0 || max_bisections <= 0) {
    throw PreconditionError("wolfe: budgets must be positive");
  }
}

StepResult wolfe_search(const LineFunction& phi, const WolfeParams& params) {
  params.validate();
  StepResult out;
  out.mode = StepMode::Wolfe;

  const LinePoint start = phi(0.0);
  ++out.evals;
  if (!(start.slope < 0.0)) {
    throw PreconditionError("wolfe: not a descent direction (phi'(0) >= 0)");
  }

  const auto sufficient_decrease = [&](double alpha, const LinePoint& p) {
    return p.value <= start.value + alpha * params.c1 * start.slope;
  };
  const auto curvature = [&](const LinePoint& p) { return p.slope >= params.c2 * start.slope; };

  double alpha_max = 1.0;
  for (int doublings = 0;; ++doublings) {
    const LinePoint p = phi(alpha_max);
    ++out.evals;
    if (!sufficient_decrease(alpha_max, p)) break;
    if (doublings == params.max_bracket_doublings) {
      throw ConvergenceError("wolfe: bracketing budget exhausted", 0.0, alpha_max);
    }
    alpha_max *= 2.0;
  }

  double alpha_min = 0.0;
  double alpha = alpha_max / 2.0;
  for (int bisections = 0;; ++bisections) {
    const LinePoint p = phi(alpha);
    ++out.evals;
    const bool armijo = sufficient_decrease(alpha, p);
    if (armijo && curvature(p)) break;
    if (bisections == params.max_bisections) {
      throw ConvergenceError("wolfe: bisection budget exhausted", alpha_min, alpha_max);
    }
    if (!armijo) {
      alpha_max = alpha;
    } else {
      alpha_min = alpha;
    }
    alpha = (alpha_min + alpha_max) / 2.0;
  }
  out.alpha = alpha;
  return out;
}

double closed_form_step(double grad_inf_norm, double objective, double eta) {
  if (!(objective > 0.0) || !std::isfinite(objective)) {
    throw DomainError("closed_form_step: objective must be positive and finite");
  }
  if (!(eta > 0.0)) throw DomainError("closed_form_step: eta must be positive");
  if (!(grad_inf_norm >= 0.0)) throw DomainError("closed_form_step: negative gradient norm");
  return grad_inf_norm / (eta * objective);
}

StepResult exact_search(const LineFunction& phi, double tol, int max_bracket_doublings,
                        int max_bisections) {
  if (!(tol > 0.0)) throw PreconditionError("exact_search: tolerance must be positive");
  StepResult out;
  out.mode = StepMode::Exact;

  const LinePoint start = phi(0.0);
  ++out.evals;
  if (!(start.slope < 0.0)) {
    throw PreconditionError("exact_search: not a descent direction (phi'(0) >= 0)");
  }

  // A vanishing (underflowed) slope does not bracket: the minimizer must be
  // witnessed by a strictly positive derivative.
  double lo = 0.0;
  double hi = 1.0;
  LinePoint p_hi = phi(hi);
  ++out.evals;
  for (int doublings = 0; !(p_hi.slope > 0.0); ++doublings) {
    if (doublings == max_bracket_doublings) {
      throw ConvergenceError("exact_search: infimum not attained along ray", lo, hi);
    }
    lo = hi;
    hi *= 2.0;
    p_hi = phi(hi);
    ++out.evals;
  }

  double best_alpha = hi;
  double best_slope = std::abs(p_hi.slope);
  for (int bisections = 0; bisections < max_bisections; ++bisections) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const LinePoint p = phi(mid);
    ++out.evals;
    if (std::abs(p.slope) < best_slope) {
      best_slope = std::abs(p.slope);
      best_alpha = mid;
    }
    if (best_slope <= tol) break;
    if (p.slope < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (best_slope > tol) {
    throw ConvergenceError("exact_search: derivative tolerance not reached", lo, hi);
  }
  out.alpha = best_alpha;
  return out;
}

}  // namespace cdboost
