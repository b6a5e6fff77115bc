#include "cdboost/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cdboost/errors.hpp"

namespace cdboost::experiments {
namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto n = static_cast<Eigen::Index>(rows.begin()->size());
  Matrix a(m, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) a(i, j++) = v;
    ++i;
  }
  return a;
}

}  // namespace

BoostInstance instance_s() { return BoostInstance(from_rows({{-1, 1}, {1, -1}, {-1, -1}})); }

BoostInstance embedded_a1() {
  return BoostInstance(from_rows({{-1, 1, 0}, {1, -1, 0}, {-1, -1, 0}, {0, 0, -1}}));
}

BoostInstance embedded_a2() {
  return BoostInstance(from_rows({{-1, 1, -1}, {1, -1, -1}, {-1, -1, -1}}));
}

BoostInstance attainable_minimal() { return BoostInstance(from_rows({{-1}, {1}})); }

BoostInstance weak_learnable_minimal() { return BoostInstance(from_rows({{-1}})); }

BoostInstance rotated_s() {
  const double c = std::cos(std::numbers::pi / 4.0) / std::numbers::sqrt2;
  const double s = std::sin(std::numbers::pi / 4.0) / std::numbers::sqrt2;
  Matrix rot(2, 2);
  rot << c, -s, s, c;
  Matrix a = instance_s().matrix() * rot.transpose();
  // cos(pi/4)/sqrt(2) is 1/2 up to rounding; snap so the box check is exact.
  a = a.unaryExpr([](double v) { return std::round(v * 1e12) / 1e12 + 0.0; });
  return BoostInstance(std::move(a));
}

BoostInstance attainable_dense() {
  return BoostInstance(from_rows({
      {-0.63994258193027798, 0.66839316213960354, -0.30811624462524945},
      {0.9139120297843859, 0.55478871872752622, 0.97157148414042704},
      {0.16298573710327946, -0.82336423651372947, -0.02036577998980682},
      {0.94943883816424424, -0.11751942293215922, 0.88028787394667551},
      {-0.44761697293463076, -0.26089810236578825, -0.62354165347745949},
  }));
}

std::vector<NamedFixture> builtin_fixtures() {
  return {
      {"S", instance_s(), Regime::Mixed},
      {"A1", embedded_a1(), Regime::Mixed},
      {"A2", embedded_a2(), Regime::WeakLearnable},
      {"attainable_minimal", attainable_minimal(), Regime::Attainable},
      {"weak_learnable_minimal", weak_learnable_minimal(), Regime::WeakLearnable},
      {"S_rotated", rotated_s(), Regime::Mixed},
      {"attainable_dense", attainable_dense(), Regime::Attainable},
  };
}

BoostInstance random_instance(std::uint64_t seed, const GeneratorConfig& cfg) {
  if (cfg.m < 1 || cfg.n < 1) throw PreconditionError("random_instance: need m, n >= 1");
  if (cfg.regime == Regime::Mixed && cfg.entries == EntryKind::Uniform) {
    // A mixed instance needs a degenerate kernel; continuous entries give one
    // with probability zero.
    throw PreconditionError("random_instance: mixed instances need sign entries");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::uniform_int_distribution<int> sign(-1, 1);
  for (long attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    Matrix a(cfg.m, cfg.n);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        a(i, j) = cfg.entries == EntryKind::Sign ? sign(rng) : uniform(rng);
      }
    }
    BoostInstance inst(std::move(a));
    if (!cfg.regime || analyze(inst).regime == *cfg.regime) return inst;
  }
  throw ConvergenceError("random_instance: no instance of the requested regime found");
}

double reference_objective(const BoostInstance& inst, const Loss& loss, long max_iters,
                           double grad_tol) {
  const RowSet core = hard_core(inst);
  if (core.empty()) return 0.0;
  const BoostInstance plus = inst.rows(core);
  const Risk risk(Loss(loss.kind(), plus.m()));
  RunConfig cfg;
  cfg.grad_tol = grad_tol;
  IterateState state = make_state(plus, risk, Vector::Zero(plus.n()));
  double best = state.objective;
  for (long t = 0; t < max_iters && state.grad_inf_norm() > grad_tol; ++t) {
    try {
      state = boost_step(plus, risk, state, cfg).state;
    } catch (const ConvergenceError&) {
      break;  // the line search can no longer resolve a decrease
    }
    best = std::min(best, state.objective);
  }
  return best;
}

const char* to_string(RateModel model) {
  return model == RateModel::Geometric ? "Geometric" : "Inverse";
}

std::vector<double> suboptimality(const Trace& trace, double f_bar) {
  std::vector<double> out;
  out.reserve(trace.records.size());
  for (const auto& r : trace.records) out.push_back(r.objective - f_bar);
  return out;
}

namespace {

void check_window(const std::vector<double>& subopt, long t_first, long t_last) {
  if (t_first < 1 || t_last < t_first + 1 || t_last > static_cast<long>(subopt.size())) {
    throw PreconditionError("rate fit: window outside the trace");
  }
  for (long t = t_first; t <= t_last; ++t) {
    if (!(subopt[static_cast<std::size_t>(t - 1)] > 0.0)) {
      throw DomainError("rate fit: nonpositive suboptimality at t=" + std::to_string(t));
    }
  }
}

}  // namespace

RateFit fit_geometric(const std::vector<double>& subopt, long t_first, long t_last) {
  check_window(subopt, t_first, t_last);
  const double count = static_cast<double>(t_last - t_first + 1);
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (long t = t_first; t <= t_last; ++t) {
    const double y = std::log(subopt[static_cast<std::size_t>(t - 1)]);
    st += t;
    sy += y;
    stt += static_cast<double>(t) * t;
    sty += t * y;
  }
  const double slope = (count * sty - st * sy) / (count * stt - st * st);
  const double intercept = (sy - slope * st) / count;
  RateFit fit;
  fit.model = RateModel::Geometric;
  fit.fitted_constant = std::exp(intercept);
  fit.ratio = std::exp(slope);
  fit.t_first = t_first;
  fit.t_last = t_last;
  for (long t = t_first; t <= t_last; ++t) {
    const double s = subopt[static_cast<std::size_t>(t - 1)];
    const double model = std::exp(intercept + slope * t);
    fit.residual = std::max(fit.residual, std::abs(model - s) / s);
  }
  return fit;
}

RateFit fit_inverse(const std::vector<double>& subopt, long t_first, long t_last) {
  check_window(subopt, t_first, t_last);
  double acc = 0.0;
  for (long t = t_first; t <= t_last; ++t) {
    acc += std::log(t * subopt[static_cast<std::size_t>(t - 1)]);
  }
  RateFit fit;
  fit.model = RateModel::Inverse;
  fit.fitted_constant = std::exp(acc / static_cast<double>(t_last - t_first + 1));
  fit.t_first = t_first;
  fit.t_last = t_last;
  for (long t = t_first; t <= t_last; ++t) {
    const double s = subopt[static_cast<std::size_t>(t - 1)];
    fit.residual = std::max(fit.residual, std::abs(fit.fitted_constant / t - s) / s);
  }
  return fit;
}

double descent_guarantee_slack(const Trace& trace, double eta, double denominator, double c0) {
  double worst = std::numeric_limits<double>::infinity();
  double prev = trace.initial_objective;
  for (const auto& r : trace.records) {
    const double required = c0 * c0 * r.grad_inf * r.grad_inf / (denominator * eta * prev);
    worst = std::min(worst, (prev - r.objective) - required);
    prev = r.objective;
  }
  return worst;
}

double geometric_bound_slack(const Trace& trace, double gamma, double additive) {
  double worst = std::numeric_limits<double>::infinity();
  double prev = trace.initial_objective;
  for (const auto& r : trace.records) {
    worst = std::min(worst, prev * (1.0 - gamma * gamma / 6.0) + additive - r.objective);
    prev = r.objective;
  }
  return worst;
}

long weak_learnable_iteration_budget(double gamma, double f0, double target) {
  if (!(gamma > 0.0)) throw DomainError("iteration budget: gamma must be positive");
  return 10 * static_cast<long>(std::ceil(6.0 / (gamma * gamma) * std::log(f0 / target)));
}

LowerBoundReport analyze_lower_bound(const Trace& trace) {
  LowerBoundReport rep;
  const double f_bar = 2.0 * std::numbers::ln2;
  rep.iterations = static_cast<long>(trace.records.size());
  rep.suboptimality = suboptimality(trace, f_bar);
  rep.min_bound_slack = std::numeric_limits<double>::infinity();
  rep.max_l1_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    if (r.lambda.size() != 2) throw DimensionError("lower bound: expected a trace on S");
    const double t = static_cast<double>(r.t);
    const double u = r.lambda[r.j];
    const double v = r.lambda[1 - r.j];
    if (k == 0) rep.first_step = u;
    if (k > 0 && r.j == trace.records[k - 1].j) rep.alternates = false;
    rep.min_bound_slack = std::min(rep.min_bound_slack, rep.suboptimality[k] - 1.0 / (8.0 * t));
    const double residual = std::exp(2 * u) - std::exp(2 * v) - 2 * std::exp(v - u) - 2;
    rep.max_identity_residual = std::max(rep.max_identity_residual, std::abs(residual));
    rep.max_l1_excess =
        std::max(rep.max_l1_excess, r.lambda.lpNorm<1>() - std::log(4.0 * t));
  }
  return rep;
}

}  // namespace cdboost::experiments
