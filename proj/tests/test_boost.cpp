#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cdboost/boost.hpp"
#include "cdboost/errors.hpp"
#include "cdboost/experiments.hpp"

using namespace cdboost;
namespace ex = cdboost::experiments;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

BoostInstance column(std::initializer_list<double> xs) { return BoostInstance(Matrix(vec(xs))); }

void expect_trace_invariants(const BoostInstance& inst, const Loss& loss, const Trace& trace,
                             double c0 = 1.0) {
  const Risk risk(loss);
  double prev = trace.initial_objective;
  for (const auto& r : trace.records) {
    EXPECT_LT(r.objective, prev) << "t=" << r.t;
    const double required = c0 * c0 * r.grad_inf * r.grad_inf / (6 * loss.eta() * prev);
    EXPECT_GE(prev - r.objective, required) << "t=" << r.t;
    prev = r.objective;
  }
  const IterateState& s = trace.final_state;
  EXPECT_LE((s.margins - inst.matrix() * s.lambda).lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_LE((s.grad - inst.matrix().transpose() * s.dual_weights).lpNorm<Eigen::Infinity>(),
            1e-10);
  EXPECT_TRUE((s.dual_weights.array() > 0).all());
  const Vector p = s.dual_weights / s.dual_weights.sum();
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  EXPECT_EQ(risk.value(s.margins), s.objective);
}

}  // namespace

TEST(Select, Examples) {
  auto c = select_coordinate(vec({-3, 2}));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->j, 0);
  EXPECT_EQ(c->sign, 1);
  c = select_coordinate(vec({2, 2}));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->j, 0);
  EXPECT_EQ(c->sign, -1);
  EXPECT_FALSE(select_coordinate(vec({0, 0})));
}

TEST(Select, ApproximateChooser) {
  const auto second = [](const Vector& g) { return CoordinateChoice{1, g[1] > 0 ? -1 : 1}; };
  auto c = select_coordinate(vec({-3, 2}), Selector::approx(0.5, second));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->j, 1);
  EXPECT_EQ(c->sign, -1);
  EXPECT_THROW(select_coordinate(vec({-3, 1}), Selector::approx(0.5, second)), PreconditionError);
  const auto wrong_sign = [](const Vector&) { return CoordinateChoice{0, -1}; };
  EXPECT_THROW(select_coordinate(vec({-3, 2}), Selector::approx(0.5, wrong_sign)),
               PreconditionError);
  EXPECT_THROW(Selector::approx(0.0), PreconditionError);
  EXPECT_THROW(Selector::approx(1.5), PreconditionError);
}

TEST(BoostStep, TwoIdenticalExamples) {
  const BoostInstance inst = column({-1, -1});
  const Risk risk(Loss(LossKind::Exponential, 2));
  const IterateState s0 = make_state(inst, risk, Vector::Zero(1));
  EXPECT_EQ(s0.grad, vec({-2}));
  const BoostStep step = boost_step(inst, risk, s0, RunConfig{});
  EXPECT_EQ(step.choice.j, 0);
  EXPECT_EQ(step.choice.sign, 1);
  EXPECT_LT(step.state.objective, 2.0);
  EXPECT_EQ(step.state.t, 1);
}

TEST(BoostStep, ExactFirstStepOnS) {
  const BoostInstance s = ex::instance_s();
  const Risk risk(Loss(LossKind::Logistic, 3));
  RunConfig cfg;
  cfg.line_search = ExactStep{};
  const BoostStep step = boost_step(s, risk, make_state(s, risk, Vector::Zero(2)), cfg);
  EXPECT_NEAR(step.state.lambda.lpNorm<1>(), std::numbers::ln2, 1e-10);
  EXPECT_EQ(step.state.lambda.minCoeff(), 0.0);
}

TEST(BoostStep, StationaryInputIsPreconditionError) {
  const BoostInstance inst = column({-1, 1});
  const Risk risk(Loss(LossKind::Logistic, 2));
  EXPECT_THROW(boost_step(inst, risk, make_state(inst, risk, Vector::Zero(1)), RunConfig{}),
               PreconditionError);
}

TEST(Run, AlwaysWrongLearner) {
  const BoostInstance inst = column({1});
  const Loss loss(LossKind::Exponential, 1);
  const Trace t = run(inst, loss, RunConfig{});
  EXPECT_EQ(t.status, TerminalStatus::GradientBelowTol);
  EXPECT_LT(t.final_state.lambda[0], 0.0);
  EXPECT_LT(t.final_state.objective, 1e-10 * loss.beta());
  EXPECT_NEAR(t.final_state.objective, std::exp(t.final_state.lambda[0]), 1e-25);
  expect_trace_invariants(inst, loss, t);
}

TEST(Run, ContradictoryExamples) {
  const BoostInstance inst = column({-1, 1});
  const Loss loss(LossKind::Logistic, 2);
  const Trace t = run(inst, loss, RunConfig{});
  EXPECT_EQ(t.status, TerminalStatus::GradientBelowTol);
  EXPECT_TRUE(t.records.empty());
  EXPECT_NEAR(t.final_state.objective, 2 * std::numbers::ln2, 1e-8);
  EXPECT_LE(t.final_state.grad_inf_norm(), 1e-10);
}

TEST(Run, ExactSearchOnSHasInverseRate) {
  RunConfig cfg;
  cfg.line_search = ExactStep{};
  cfg.max_iters = 100;
  const Trace t = run(ex::instance_s(), Loss(LossKind::Logistic, 3), cfg);
  ASSERT_EQ(t.records.size(), 100u);
  EXPECT_EQ(t.status, TerminalStatus::MaxIters);
  const auto subopt = ex::suboptimality(t, 2 * std::numbers::ln2);
  const auto fit = ex::fit_inverse(subopt, 5, 100);
  EXPECT_LE(fit.fitted_constant, 10.0);
  EXPECT_GE(subopt[99], 1.0 / 800.0);
  EXPECT_LE(subopt[99], fit.fitted_constant / 100.0);
}

TEST(Run, TargetStopsEarly) {
  RunConfig cfg;
  cfg.target = 1e-3;
  const Trace t = run(ex::embedded_a2(), Loss(LossKind::Exponential, 3), cfg);
  EXPECT_EQ(t.status, TerminalStatus::TargetReached);
  EXPECT_LE(t.final_state.objective, 1e-3);
  EXPECT_GT(t.records.size() > 1 ? t.records[t.records.size() - 2].objective : 3.0, 1e-3);
}

TEST(Run, MaxItersAndValidation) {
  RunConfig cfg;
  cfg.max_iters = 3;
  const Trace t = run(ex::instance_s(), Loss(LossKind::Logistic, 3), cfg);
  EXPECT_EQ(t.status, TerminalStatus::MaxIters);
  EXPECT_EQ(t.records.size(), 3u);
  cfg.grad_tol = 0.0;
  EXPECT_THROW(run(ex::instance_s(), Loss(LossKind::Logistic, 3), cfg), PreconditionError);
  EXPECT_THROW(run(ex::instance_s(), Loss(LossKind::Logistic, 4), RunConfig{}), DimensionError);
}

TEST(Run, InvariantsOnFixtures) {
  for (const auto& fx : ex::builtin_fixtures()) {
    for (LossKind kind : {LossKind::Exponential, LossKind::Logistic}) {
      const Loss loss(kind, fx.instance.m());
      RunConfig cfg;
      cfg.max_iters = 60;
      cfg.grad_tol = 1e-6;
      const Trace t = run(fx.instance, loss, cfg);
      SCOPED_TRACE(fx.name + "/" + std::string(loss.name()));
      expect_trace_invariants(fx.instance, loss, t);
    }
  }
}

TEST(Run, ApproximateSelectorDegradesByC0Squared) {
  // Adversary: the worst coordinate still within c0 of the best.
  const double c0 = 0.6;
  const auto adversary = [c0](const Vector& g) {
    const double top = g.lpNorm<Eigen::Infinity>();
    Eigen::Index pick = 0;
    double smallest = top;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      if (std::abs(g[j]) >= c0 * top && std::abs(g[j]) <= smallest) {
        smallest = std::abs(g[j]);
        pick = j;
      }
    }
    return CoordinateChoice{pick, g[pick] > 0 ? -1 : 1};
  };
  for (const auto& fx : ex::builtin_fixtures()) {
    const Loss loss(LossKind::Exponential, fx.instance.m());
    RunConfig cfg;
    cfg.max_iters = 60;
    cfg.grad_tol = 1e-6;
    cfg.selector = Selector::approx(c0, adversary);
    SCOPED_TRACE(fx.name);
    expect_trace_invariants(fx.instance, loss, run(fx.instance, loss, cfg), c0);
  }
}
