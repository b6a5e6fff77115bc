#include "cdboost/boost.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "cdboost/errors.hpp"

namespace cdboost {

IterateState make_state(const BoostInstance& inst, const Risk& risk, Vector lambda, long t) {
  IterateState s;
  s.margins = inst.margins(lambda);
  s.lambda = std::move(lambda);
  s.objective = risk.value(s.margins);
  s.dual_weights = risk.grad(s.margins);
  s.grad = inst.matrix().transpose() * s.dual_weights;
  s.t = t;
  return s;
}

Selector Selector::approx(double c0, std::function<CoordinateChoice(const Vector&)> chooser) {
  if (!(c0 > 0.0 && c0 <= 1.0)) {
    throw PreconditionError("selector: c0 must lie in (0,1]");
  }
  Selector s;
  s.c0 = c0;
  s.custom = std::move(chooser);
  return s;
}

std::optional<CoordinateChoice> select_coordinate(const Vector& grad, const Selector& selector) {
  if (!grad.allFinite()) throw DomainError("select_coordinate: non-finite gradient");
  if (grad.size() == 0) return std::nullopt;
  Eigen::Index best = 0;
  double top = 0.0;
  for (Eigen::Index j = 0; j < grad.size(); ++j) {
    if (std::abs(grad[j]) > top) {
      top = std::abs(grad[j]);
      best = j;
    }
  }
  if (top == 0.0) return std::nullopt;

  if (!selector.custom) {
    return CoordinateChoice{best, grad[best] > 0.0 ? -1 : 1};
  }
  const CoordinateChoice choice = selector.custom(grad);
  if (choice.j < 0 || choice.j >= grad.size() || (choice.sign != 1 && choice.sign != -1)) {
    throw PreconditionError("select_coordinate: custom selector returned an invalid choice");
  }
  if (-choice.sign * grad[choice.j] < selector.c0 * top) {
    std::ostringstream msg;
    msg << "select_coordinate: choice (" << choice.j << "," << choice.sign
        << ") is worse than c0=" << selector.c0 << " of the best coordinate";
    throw PreconditionError(msg.str());
  }
  return choice;
}

void RunConfig::validate() const {
  if (!(grad_tol > 0.0)) throw PreconditionError("run: grad_tol must be positive");
  if (max_iters < 0) throw PreconditionError("run: max_iters must be nonnegative");
  if (auto* w = std::get_if<WolfeParams>(&line_search)) w->validate();
}

const char* to_string(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::GradientBelowTol:
      return "GradientBelowTol";
    case TerminalStatus::MaxIters:
      return "MaxIters";
    case TerminalStatus::TargetReached:
      return "TargetReached";
  }
  return "?";
}

namespace {

// phi(alpha) = f(x + alpha * sign * A_j) and its derivative.
LineFunction coordinate_ray(const BoostInstance& inst, const Risk& risk, const Vector& margins,
                            CoordinateChoice choice) {
  const Vector column = inst.matrix().col(choice.j) * static_cast<double>(choice.sign);
  return [&risk, &margins, column](double alpha) {
    const Vector x = margins + alpha * column;
    const Vector w = risk.grad(x);
    double slope = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      // Zero entries contribute nothing even when g'(x_i) overflows.
      if (column[i] != 0.0) slope += column[i] * w[i];
    }
    return LinePoint{risk.value(x), slope};
  };
}

}  // namespace

BoostStep boost_step(const BoostInstance& inst, const Risk& risk, const IterateState& state,
                     const RunConfig& cfg) {
  if (!(state.grad_inf_norm() > cfg.grad_tol)) {
    throw PreconditionError("boost_step: gradient already below tolerance");
  }
  const auto choice = select_coordinate(state.grad, cfg.selector);
  if (!choice) throw PreconditionError("boost_step: iterate is stationary");

  const LineFunction phi = coordinate_ray(inst, risk, state.margins, *choice);
  StepResult step = std::visit(
      [&](const auto& ls) -> StepResult {
        using T = std::decay_t<decltype(ls)>;
        if constexpr (std::is_same_v<T, WolfeParams>) {
          return wolfe_search(phi, ls);
        } else if constexpr (std::is_same_v<T, ExactStep>) {
          return exact_search(phi, ls.tol);
        } else {
          const double eta = risk.loss().eta();
          if (!std::isfinite(eta)) {
            throw DomainError("closed-form step needs a finite eta");
          }
          return StepResult{closed_form_step(state.grad_inf_norm(), state.objective, eta), 0,
                            StepMode::ClosedForm};
        }
      },
      cfg.line_search);

  Vector lambda = state.lambda;
  lambda[choice->j] += step.alpha * choice->sign;
  return BoostStep{make_state(inst, risk, std::move(lambda), state.t + 1), *choice, step};
}

Trace run(const BoostInstance& inst, const Loss& loss, const RunConfig& cfg) {
  cfg.validate();
  if (loss.sample_size() != inst.m()) {
    throw DimensionError("run: loss sample size does not match instance rows");
  }
  const Risk risk(loss);
  const auto clock_start = std::chrono::steady_clock::now();

  Trace trace;
  IterateState state = make_state(inst, risk, Vector::Zero(inst.n()));
  trace.initial_objective = state.objective;

  const auto finished = [&](const IterateState& s) -> std::optional<TerminalStatus> {
    if (cfg.target && s.objective <= *cfg.target) return TerminalStatus::TargetReached;
    if (s.grad_inf_norm() <= cfg.grad_tol) return TerminalStatus::GradientBelowTol;
    return std::nullopt;
  };

  trace.status = TerminalStatus::MaxIters;
  for (;;) {
    if (auto done = finished(state)) {
      trace.status = *done;
      break;
    }
    if (state.t >= cfg.max_iters) break;
    const double grad_inf = state.grad_inf_norm();
    BoostStep next = boost_step(inst, risk, state, cfg);
    state = std::move(next.state);

    TraceRecord rec;
    rec.t = state.t;
    rec.objective = state.objective;
    rec.grad_inf = grad_inf;
    rec.j = next.choice.j;
    rec.sign = next.choice.sign;
    rec.alpha = next.step.alpha;
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
    rec.lambda = state.lambda;
    trace.records.push_back(std::move(rec));
  }
  trace.final_state = std::move(state);
  return trace;
}

}  // namespace cdboost
