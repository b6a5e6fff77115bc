// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "cdboost/boost.hpp"
#include "cdboost/experiments.hpp"
#include "cdboost/io.hpp"
#include "cdboost/structure.hpp"

using namespace cdboost;
namespace ex = cdboost::experiments;

namespace {

const double kLn2 = std::numbers::ln2;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

std::string fixture_path(const std::string& name) {
  return std::string(CDBOOST_FIXTURE_DIR) + "/" + name + ".json";
}

BoostInstance random_box_matrix(std::mt19937_64& rng, bool sign_entries) {
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> sgn(-1, 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(dim(rng), dim(rng));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = sign_entries ? sgn(rng) : u(rng);
  }
  return BoostInstance(a);
}

// 1. Lower bound on S with exact line search.
void lower_bound(Verdict& v) {
  RunConfig cfg;
  cfg.line_search = ExactStep{};
  cfg.max_iters = ex::kLowerBoundIters;
  const Trace trace = run(ex::instance_s(), Loss(LossKind::Logistic, 3), cfg);
  const auto rep = ex::analyze_lower_bound(trace);
  v.require(rep.iterations == 200, "200 iterations");
  bool every_t = true;
  for (std::size_t k = 0; k < rep.suboptimality.size(); ++k) {
    const double t = static_cast<double>(k + 1);
    every_t = every_t && (rep.suboptimality[k] >= 1.0 / (8.0 * t));
  }
  v.require(every_t, "f_t - 2 ln 2 >= 1/(8t) for every t");
  v.require(std::abs(rep.first_step - kLn2) <= 1e-10, "u_1 = ln 2");
  v.require(rep.max_identity_residual <= 1e-8, "stationarity identity");
  v.detail << "min slack " << rep.min_bound_slack << ", |u1-ln2| "
           << std::abs(rep.first_step - kLn2) << ", identity residual "
           << rep.max_identity_residual;
}

// 2. Weak-learnable geometric rate, exponential loss, Wolfe(1/3,1/2).
void weak_learnable_rate(Verdict& v) {
  std::vector<std::pair<std::string, BoostInstance>> cases = {{"A2", ex::embedded_a2()}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ex::GeneratorConfig g;
    g.m = 2 + static_cast<long>(seed % 5);
    g.n = 2 + static_cast<long>((seed / 5) % 4);
    g.regime = Regime::WeakLearnable;
    cases.emplace_back("seed" + std::to_string(seed), ex::random_instance(1000 + seed, g));
  }
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_budget_used = 0.0;
  for (const auto& [name, inst] : cases) {
    const double gamma = gamma_classical(inst);
    const Loss loss(LossKind::Exponential, inst.m());
    const double f0 = static_cast<double>(inst.m());
    RunConfig cfg;
    cfg.target = 1e-6;
    cfg.max_iters = ex::weak_learnable_iteration_budget(gamma, f0, 1e-6);
    const Trace trace = run(inst, loss, cfg);
    const double slack = ex::geometric_bound_slack(trace, gamma, 1e-9);
    worst_slack = std::min(worst_slack, slack);
    worst_budget_used =
        std::max(worst_budget_used, static_cast<double>(trace.records.size()) / cfg.max_iters);
    v.require(slack >= 0.0, name + ": f_{t+1} <= f_t (1 - gamma^2/6) + 1e-9");
    v.require(trace.status == TerminalStatus::TargetReached && trace.final_state.objective <= 1e-6,
              name + ": objective <= 1e-6 within budget");
  }
  v.detail << cases.size() << " instances, min slack " << worst_slack
           << ", largest fraction of the iteration budget used " << worst_budget_used;
}

// 3. Per-step descent guarantees on every fixture run.
void wolfe_guarantee(Verdict& v) {
  double worst_wolfe = std::numeric_limits<double>::infinity();
  double worst_closed = std::numeric_limits<double>::infinity();
  long steps = 0;
  for (const auto& fx : ex::builtin_fixtures()) {
    for (LossKind kind : {LossKind::Exponential, LossKind::Logistic}) {
      const Loss loss(kind, fx.instance.m());
      const std::string tag = fx.name + "/" + std::string(loss.name());
      RunConfig cfg;
      const Trace wolfe = run(fx.instance, loss, cfg);
      const double sw = ex::descent_guarantee_slack(wolfe, loss.eta(), 6.0);
      worst_wolfe = std::min(worst_wolfe, sw);
      v.require(sw >= 0.0, tag + " wolfe 6-eta bound");

      cfg.line_search = ClosedFormStep{};
      const Trace closed = run(fx.instance, loss, cfg);
      const double sc = ex::descent_guarantee_slack(closed, loss.eta(), 2.0);
      worst_closed = std::min(worst_closed, sc);
      v.require(sc >= 0.0, tag + " closed-form 2-eta bound");
      steps += static_cast<long>(wolfe.records.size() + closed.records.size());
    }
  }
  v.detail << steps << " steps, min slack wolfe " << worst_wolfe << ", closed-form "
           << worst_closed;
}

// 4. Structural alternatives on random matrices.
void structural_exclusivity(Verdict& v) {
  std::mt19937_64 rng(4);
  int counts[3] = {0, 0, 0};
  const int trials = 1000;
  for (int k = 0; k < trials; ++k) {
    const BoostInstance inst = random_box_matrix(rng, k % 2 == 0);
    const std::string tag = "matrix " + std::to_string(k);
    const bool wl = weak_learnable(inst).holds;
    const RowSet core = hard_core(inst);
    v.require(wl != !core.empty(), tag + ": Gordan alternatives exclusive and exhaustive");
    const bool att = attainable(inst).holds;
    const bool dir = nonpositive_nonzero_direction(inst).has_value();
    v.require(att != dir, tag + ": Stiemke alternatives exclusive and exhaustive");
    const auto d = decompose(inst);
    v.require(d.rows_plus == core, tag + ": A_+ rows = hard core");
    if (d.zero_part) v.require(hard_core(*d.zero_part).empty(), tag + ": Phi_{A_0} = {0}");
    if (d.plus_part) v.require(attainable(*d.plus_part).holds, tag + ": A_+ attainable");
    const double gamma = gamma_classical(inst);
    v.require(wl ? gamma > 1e-8 : gamma <= 1e-8, tag + ": gamma > 0 iff weak learnable");
    ++counts[static_cast<int>(analyze(inst).regime)];
  }
  v.require(hard_core(ex::instance_s()) == RowSet{0, 1}, "hard_core(S) = rows 1,2");
  v.detail << trials << " matrices (weak " << counts[0] << ", attainable " << counts[1]
           << ", mixed " << counts[2] << "), H(S) = {1,2} in 1-based rows";
}

// 5. Conjugate and duality properties.
void duality(Verdict& v) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x_dist(-30.0, 5.0);
  double worst_fy = 0.0, worst_inv = 0.0;
  for (LossKind kind : {LossKind::Exponential, LossKind::Logistic}) {
    const Loss g(kind, 1);
    for (int k = 0; k < 1000; ++k) {
      const double x = x_dist(rng);
      const double phi = g.grad(x);
      worst_fy = std::max(worst_fy, std::abs(g.value(x) + g.conj(phi) - x * phi));
      worst_inv =
          std::max(worst_inv, std::abs(g.conj_grad(phi) - x) / std::max(1.0, std::abs(x)));
    }
  }
  v.require(worst_fy <= 1e-9, "Fenchel-Young equality");
  v.require(worst_inv <= 1e-10, "conj_grad(grad(x)) = x");

  double worst_gap = std::numeric_limits<double>::infinity();
  long certificates = 0;
  for (const auto& fx : ex::builtin_fixtures()) {
    for (LossKind kind : {LossKind::Exponential, LossKind::Logistic}) {
      const Loss loss(kind, fx.instance.m());
      RunConfig cfg;
      cfg.max_iters = 300;
      const Trace trace = run(fx.instance, loss, cfg);
      std::vector<Vector> iterates = {Vector::Zero(fx.instance.n())};
      for (const auto& r : trace.records) iterates.push_back(r.lambda);
      for (const auto& lambda : iterates) {
        const auto cert =
            dual_certificate(fx.instance, loss, make_state(fx.instance, Risk(loss), lambda));
        if (!cert) continue;
        ++certificates;
        worst_gap = std::min(worst_gap, cert->gap_bound);
      }
    }
  }
  v.require(worst_gap >= -1e-8, "weak duality gap_bound >= -1e-8");

  const BoostInstance pair = ex::attainable_minimal();
  const Loss logistic(LossKind::Logistic, 2);
  const Trace trace = run(pair, logistic, RunConfig{});
  const auto cert = dual_certificate(pair, logistic, trace.final_state);
  v.require(cert.has_value(), "certificate exists on ((-1),(+1))");
  if (cert) {
    v.require(cert->gap_bound <= 1e-6, "terminal gap <= 1e-6 on ((-1),(+1))");
    v.require(std::abs(cert->psi[0] - cert->psi[1]) <= 1e-12, "psi has equal coordinates");
    v.detail << "terminal gap " << cert->gap_bound << ", ";
  }
  v.detail << "FY " << worst_fy << ", inverse " << worst_inv << ", " << certificates
           << " certificates, min gap " << worst_gap;
}

// 6. Mixed-regime 1/t envelope on S with Wolfe search.
void inverse_envelope(Verdict& v) {
  RunConfig cfg;
  cfg.max_iters = ex::kMixedFitEval;
  const Trace trace = run(ex::instance_s(), Loss(LossKind::Logistic, 3), cfg);
  v.require(trace.records.size() == static_cast<std::size_t>(ex::kMixedFitEval), "200 steps");
  const auto subopt = ex::suboptimality(trace, 2 * kLn2);
  const auto fit = ex::fit_inverse(subopt, ex::kFitFirst, ex::kMixedFitLast);
  const double s200 = subopt.back();
  const double lo = 1.0 / 1600.0, hi = fit.fitted_constant / 200.0;
  v.require(s200 >= lo && s200 <= hi, "s_200 in [1/1600, C/200]");
  v.require(fit.residual <= ex::kInverseResidualTol, "inverse fit residual <= 0.3");
  v.detail << "s_200 " << s200 << " in [" << lo << ", " << hi << "], C " << fit.fitted_constant
           << ", residual " << fit.residual;
}

// 7. Determinism and serialization.
void determinism(Verdict& v) {
  int traces = 0, instances = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ex::GeneratorConfig g;
    g.m = 4;
    g.n = 3;
    const auto a = ex::random_instance(seed, g);
    const auto b = ex::random_instance(seed, g);
    for (LossKind kind : {LossKind::Exponential, LossKind::Logistic}) {
      RunConfig cfg;
      cfg.max_iters = 200;
      const std::string ta = io::trace_to_csv(run(a, Loss(kind, 4), cfg));
      const std::string tb = io::trace_to_csv(run(b, Loss(kind, 4), cfg));
      v.require(ta == tb, "byte-identical traces for seed " + std::to_string(seed));
      ++traces;
    }
  }
  std::mt19937_64 rng(7);
  std::vector<BoostInstance> pool;
  for (const auto& fx : ex::builtin_fixtures()) pool.push_back(fx.instance);
  for (int k = 0; k < 200; ++k) pool.push_back(random_box_matrix(rng, false));
  for (const auto& inst : pool) {
    const auto back = io::instance_from_json(io::instance_to_json(inst)).instance;
    v.require(std::memcmp(back.matrix().data(), inst.matrix().data(),
                          sizeof(double) * static_cast<std::size_t>(inst.matrix().size())) == 0 &&
                  back.m() == inst.m() && back.n() == inst.n(),
              "bit-exact JSON round trip");
    ++instances;
  }
  for (const auto& fx : ex::builtin_fixtures()) {
    v.require(io::load_instance(fixture_path(fx.name)).instance == fx.instance,
              "shipped fixture " + fx.name + " matches");
  }
  v.detail << traces << " trace pairs, " << instances << " JSON round trips";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria = {
      {"lower bound 1/(8t) on S (exact search)", lower_bound},
      {"weak-learnable geometric rate", weak_learnable_rate},
      {"Wolfe and closed-form single-step guarantees", wolfe_guarantee},
      {"structural exclusivity", structural_exclusivity},
      {"conjugate and duality properties", duality},
      {"mixed-regime 1/t envelope on S (Wolfe)", inverse_envelope},
      {"determinism and serialization", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      criteria[k].second(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %zu: %s (%s)\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                v.detail.str().c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
