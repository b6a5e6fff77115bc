// cdboost: boosting as l1 steepest coordinate descent, structural analysis
// of boosting instances, and convergence-rate experiments.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cdboost/boost.hpp"
#include "cdboost/errors.hpp"
#include "cdboost/experiments.hpp"
#include "cdboost/io.hpp"
#include "cdboost/structure.hpp"

namespace {

using namespace cdboost;
namespace ex = cdboost::experiments;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct RunFlags {
  std::string loss = "logistic";
  std::string line_search = "wolfe";
  double c1 = 1.0 / 3.0;
  double c2 = 0.5;
  double grad_tol = 1e-10;
  double exact_tol = 1e-12;
  long iters = 1000;
  std::optional<double> target;
  std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--loss", f.loss, "exp | logistic")->check(CLI::IsMember({"exp", "logistic"}));
  cmd->add_option("--line-search", f.line_search, "wolfe | closed | exact")
      ->check(CLI::IsMember({"wolfe", "closed", "exact"}));
  cmd->add_option("--c1", f.c1, "sufficient-decrease constant");
  cmd->add_option("--c2", f.c2, "curvature constant");
  cmd->add_option("--grad-tol", f.grad_tol, "stop when ||A^T grad f||_inf <= this");
  cmd->add_option("--exact-tol", f.exact_tol, "derivative tolerance of the exact search");
  cmd->add_option("--iters", f.iters, "maximum number of iterations");
  cmd->add_option("--target", f.target, "stop once the objective is at or below this");
}

RunConfig make_config(const RunFlags& f) {
  RunConfig cfg;
  cfg.grad_tol = f.grad_tol;
  cfg.max_iters = f.iters;
  cfg.target = f.target;
  if (f.line_search == "wolfe") {
    WolfeParams w;
    w.c1 = f.c1;
    w.c2 = f.c2;
    cfg.line_search = w;
  } else if (f.line_search == "closed") {
    cfg.line_search = ClosedFormStep{};
  } else {
    cfg.line_search = ExactStep{f.exact_tol};
  }
  return cfg;
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    io::write_file_atomic(out, content);
  }
}

int cmd_run(const std::string& path, const RunFlags& flags) {
  const auto file = io::load_instance(path);
  const Loss loss = Loss::from_name(flags.loss, file.instance.m());
  const Trace trace = run(file.instance, loss, make_config(flags));
  emit(flags.out, io::trace_to_csv(trace));
  std::cerr << "status " << to_string(trace.status) << ", iterations " << trace.records.size()
            << ", objective " << io::format_double(trace.final_state.objective) << ", grad_inf "
            << io::format_double(trace.final_state.grad_inf_norm()) << "\n";
  return trace.status == TerminalStatus::MaxIters ? kExitNotConverged : kExitOk;
}

std::string rows_text(const RowSet& rows) {
  std::ostringstream s;
  s << "{";
  for (std::size_t k = 0; k < rows.size(); ++k) s << (k ? "," : "") << rows[k];
  s << "}";
  return s.str();
}

std::string vector_text(const Vector& v) {
  std::ostringstream s;
  s << "(";
  for (Eigen::Index k = 0; k < v.size(); ++k) s << (k ? ", " : "") << v[k];
  s << ")";
  return s.str();
}

int cmd_analyze(const std::string& path, const std::string& format, const std::string& out) {
  const auto file = io::load_instance(path);
  const StructureReport rep = analyze(file.instance);
  if (format == "json") {
    emit(out, io::report_to_json(rep, file.instance));
    return kExitOk;
  }
  std::ostringstream s;
  s << "regime: " << to_string(rep.regime) << "\n"
    << "hard core H(A): " << rows_text(rep.hard_core) << " (0-based rows)\n"
    << "A_0 rows: " << rows_text(rep.rows_zero) << "\n"
    << "A_+ rows: " << rows_text(rep.rows_plus) << "\n"
    << "classical weak learning rate: " << rep.gamma_classical << "\n";
  if (rep.witness_primal) {
    s << "halfspace witness lambda (A_0 lambda <= -1, A_+ lambda = 0): "
      << vector_text(*rep.witness_primal) << "\n";
  }
  if (rep.witness_dual) {
    s << "dual witness psi (A^T psi = 0, positive on H(A)): " << vector_text(*rep.witness_dual)
      << "\n";
  }
  emit(out, s.str());
  return kExitOk;
}

int cmd_certify(const std::string& path, const std::string& loss_name,
                const std::string& trace_path, const std::vector<double>& lambda_values,
                const std::string& out) {
  const auto file = io::load_instance(path);
  const BoostInstance& inst = file.instance;
  Vector lambda;
  if (!trace_path.empty()) {
    lambda = io::replay_lambda(io::trace_from_csv(io::read_file(trace_path)), inst.n());
  } else if (!lambda_values.empty()) {
    lambda = Eigen::Map<const Vector>(lambda_values.data(),
                                      static_cast<Eigen::Index>(lambda_values.size()));
  } else {
    lambda = Vector::Zero(inst.n());
  }
  const Loss loss = Loss::from_name(loss_name, inst.m());
  const IterateState state = make_state(inst, Risk(loss), lambda);
  const auto cert = dual_certificate(inst, loss, state);
  if (cert) {
    std::cerr << "gap_bound " << io::format_double(cert->gap_bound) << "\n";
  } else {
    std::cerr << "certificate unavailable\n";
  }
  emit(out, io::certificate_to_json(cert, state.objective));
  return kExitOk;
}

// A built-in fixture with reference optima for both losses.
int cmd_gen_fixture(const std::string& name, const std::string& out) {
  for (const auto& fx : ex::builtin_fixtures()) {
    if (fx.name != name) continue;
    std::map<std::string, double> reference;
    for (LossKind kind : {LossKind::Exponential, LossKind::Logistic}) {
      const Loss loss(kind, fx.instance.m());
      reference[std::string(loss.name())] = ex::reference_objective(fx.instance, loss);
    }
    emit(out, io::instance_to_json(fx.instance, reference, "reference-run"));
    return kExitOk;
  }
  throw ValidationError("gen: unknown fixture '" + name + "'");
}

int cmd_gen(long m, long n, std::uint64_t seed, const std::string& regime,
            const std::string& entries, const std::string& format, const std::string& out) {
  ex::GeneratorConfig cfg;
  cfg.m = m;
  cfg.n = n;
  cfg.entries = entries == "sign" ? ex::EntryKind::Sign : ex::EntryKind::Uniform;
  if (regime == "weak") cfg.regime = Regime::WeakLearnable;
  if (regime == "attainable") cfg.regime = Regime::Attainable;
  if (regime == "mixed") cfg.regime = Regime::Mixed;
  const BoostInstance inst = ex::random_instance(seed, cfg);
  emit(out, format == "csv" ? io::instance_to_csv(inst) : io::instance_to_json(inst));
  return kExitOk;
}

ordered_json fit_json(const ex::RateFit& fit) {
  ordered_json j;
  j["model"] = ex::to_string(fit.model);
  j["fitted_constant"] = fit.fitted_constant;
  if (fit.model == ex::RateModel::Geometric) j["ratio"] = fit.ratio;
  j["residual"] = fit.residual;
  j["window"] = {fit.t_first, fit.t_last};
  return j;
}

// Runs the per-regime rate experiments on the built-in fixtures. Returns
// kExitNotConverged when any asserted bound fails.
int cmd_rates(const std::string& loss_name, long iters, const std::string& out) {
  ordered_json report;
  bool ok = true;
  const auto check = [&](ordered_json& entry, const char* name, bool pass) {
    entry["checks"][name] = pass;
    ok = ok && pass;
  };

  for (const auto& fx : ex::builtin_fixtures()) {
    if (analyze(fx.instance).regime != fx.regime) {
      throw InvariantError("fixture " + fx.name + " is no longer classified as " +
                           to_string(fx.regime));
    }
  }

  {  // Weak learnable: exponential loss, per-iteration geometric bound.
    const BoostInstance a2 = ex::embedded_a2();
    const double gamma = gamma_classical(a2);
    RunConfig cfg;
    cfg.max_iters = iters;
    cfg.target = 1e-6;
    const Trace trace = run(a2, Loss(LossKind::Exponential, a2.m()), cfg);
    ordered_json e;
    e["fixture"] = "A2";
    e["loss"] = "exp";
    e["gamma_classical"] = gamma;
    e["iterations"] = trace.records.size();
    e["final_objective"] = trace.final_state.objective;
    e["min_bound_slack"] = ex::geometric_bound_slack(trace, gamma);
    check(e, "geometric_bound", ex::geometric_bound_slack(trace, gamma) >= 0.0);
    check(e, "target_reached", trace.status == TerminalStatus::TargetReached);
    report["weak_learnable"] = e;
  }

  {  // Attainable: geometric fit on the dense 4x2 fixture.
    const BoostInstance inst = ex::attainable_dense();
    const Loss loss = Loss::from_name(loss_name, inst.m());
    const double f_bar = ex::reference_objective(inst, loss);
    RunConfig cfg;
    cfg.max_iters = ex::kAttainableFitLast;
    cfg.grad_tol = 1e-300;
    const Trace trace = run(inst, loss, cfg);
    const auto subopt = ex::suboptimality(trace, f_bar);
    const auto fit = ex::fit_geometric(subopt, ex::kFitFirst, ex::kAttainableFitLast);
    ordered_json e;
    e["fixture"] = "attainable_dense";
    e["loss"] = loss_name;
    e["reference_objective"] = f_bar;
    e["fit"] = fit_json(fit);
    check(e, "geometric_fit", fit.residual <= ex::kGeometricResidualTol && fit.ratio < 1.0);
    report["attainable"] = e;
  }

  {  // Mixed: S with exact search (lower bound) and with Wolfe (1/t envelope).
    const BoostInstance s = ex::instance_s();
    const Loss logistic(LossKind::Logistic, s.m());
    RunConfig exact;
    exact.max_iters = ex::kLowerBoundIters;
    exact.line_search = ExactStep{};
    const auto lb = ex::analyze_lower_bound(run(s, logistic, exact));
    ordered_json e;
    e["fixture"] = "S";
    e["loss"] = "logistic";
    e["lower_bound"] = {{"iterations", lb.iterations},
                        {"first_step", lb.first_step},
                        {"min_slack", lb.min_bound_slack},
                        {"max_identity_residual", lb.max_identity_residual},
                        {"alternates", lb.alternates}};
    check(e, "lower_bound", lb.min_bound_slack >= 0.0);
    check(e, "first_step", std::abs(lb.first_step - std::numbers::ln2) <= 1e-10);
    check(e, "stationarity_identity", lb.max_identity_residual <= 1e-8);

    RunConfig wolfe;
    wolfe.max_iters = ex::kMixedFitEval;
    const Trace wt = run(s, logistic, wolfe);
    const auto subopt = ex::suboptimality(wt, 2.0 * std::numbers::ln2);
    const auto fit = ex::fit_inverse(subopt, ex::kFitFirst, ex::kMixedFitLast);
    const double at_eval = subopt[static_cast<std::size_t>(ex::kMixedFitEval - 1)];
    e["inverse_fit"] = fit_json(fit);
    e["suboptimality_at_eval"] = at_eval;
    check(e, "inverse_envelope",
          at_eval >= 1.0 / (8.0 * ex::kMixedFitEval) &&
              at_eval <= fit.fitted_constant / ex::kMixedFitEval &&
              fit.residual <= ex::kInverseResidualTol);
    report["mixed"] = e;
  }

  report["all_passed"] = ok;
  emit(out, report.dump(2) + "\n");
  return ok ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cdboost: boosting as l1 steepest coordinate descent"};
  app.require_subcommand(1);

  RunFlags run_flags;
  std::string run_path;
  auto* run_cmd = app.add_subcommand("run", "run Boost on an instance and write the trace CSV");
  run_cmd->add_option("instance", run_path, "instance file (JSON or CSV)")->required();
  add_run_flags(run_cmd, run_flags);
  run_cmd->add_option("--out", run_flags.out, "output file (default stdout)");

  std::string analyze_path, analyze_format = "json", analyze_out;
  auto* analyze_cmd = app.add_subcommand("analyze", "classify an instance (structure report)");
  analyze_cmd->add_option("instance", analyze_path, "instance file")->required();
  analyze_cmd->add_option("--format", analyze_format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_option("--out", analyze_out, "output file (default stdout)");

  std::string rates_loss = "logistic", rates_out;
  long rates_iters = 100000;
  auto* rates_cmd = app.add_subcommand("rates", "reproduce the convergence-rate regimes");
  rates_cmd->add_option("--loss", rates_loss, "loss for the attainable fixture")
      ->check(CLI::IsMember({"exp", "logistic"}));
  rates_cmd->add_option("--iters", rates_iters, "iteration cap for the weak-learnable run");
  rates_cmd->add_option("--out", rates_out, "output file (default stdout)");

  std::string cert_path, cert_loss = "logistic", cert_trace, cert_out;
  std::vector<double> cert_lambda;
  auto* cert_cmd = app.add_subcommand("certify", "dual certificate at a primal iterate");
  cert_cmd->add_option("instance", cert_path, "instance file")->required();
  cert_cmd->add_option("--loss", cert_loss, "exp | logistic")
      ->check(CLI::IsMember({"exp", "logistic"}));
  cert_cmd->add_option("--trace", cert_trace, "trace CSV; lambda is its final iterate");
  cert_cmd->add_option("--lambda", cert_lambda, "explicit lambda")->delimiter(',');
  cert_cmd->add_option("--out", cert_out, "output file (default stdout)");

  long gen_m = 4, gen_n = 3;
  std::uint64_t gen_seed = 0;
  std::string gen_regime = "any", gen_entries = "uniform", gen_format = "json", gen_out;
  std::string gen_fixture;
  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen_cmd->add_option("--m", gen_m, "rows (examples)");
  gen_cmd->add_option("--n", gen_n, "columns (weak learners)");
  gen_cmd->add_option("--seed", gen_seed, "random seed");
  gen_cmd->add_option("--regime", gen_regime, "weak | attainable | mixed | any")
      ->check(CLI::IsMember({"weak", "attainable", "mixed", "any"}));
  gen_cmd->add_option("--entries", gen_entries, "sign | uniform")
      ->check(CLI::IsMember({"sign", "uniform"}));
  gen_cmd->add_option("--format", gen_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  gen_cmd->add_option("--fixture", gen_fixture,
                      "emit a built-in fixture (S, A1, A2, attainable_minimal, "
                      "weak_learnable_minimal, S_rotated, attainable_dense) with reference optima");
  gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run_cmd) return cmd_run(run_path, run_flags);
    if (*analyze_cmd) return cmd_analyze(analyze_path, analyze_format, analyze_out);
    if (*rates_cmd) return cmd_rates(rates_loss, rates_iters, rates_out);
    if (*cert_cmd) return cmd_certify(cert_path, cert_loss, cert_trace, cert_lambda, cert_out);
    if (*gen_cmd) {
      if (!gen_fixture.empty()) return cmd_gen_fixture(gen_fixture, gen_out);
      return cmd_gen(gen_m, gen_n, gen_seed, gen_regime, gen_entries, gen_format, gen_out);
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
