#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdboost/boost.hpp"
#include "cdboost/instance.hpp"
#include "cdboost/structure.hpp"

namespace cdboost::experiments {

// Built-in instances.

/// The 3x2 matrix [-1 +1; +1 -1; -1 -1] behind the 1/(8t) lower bound.
BoostInstance instance_s();
/// S with a zero third column and an extra row (0,0,-1); confidence-rated.
BoostInstance embedded_a1();
/// S with an all -1 third column; weak learnable.
BoostInstance embedded_a2();
/// ((-1),(+1)): attainable, minimizer lambda = 0.
BoostInstance attainable_minimal();
/// ((-1)): weak learnable.
BoostInstance weak_learnable_minimal();
/// Rows of S rotated by pi/4 and scaled by 1/sqrt(2) into the [-1,1] box.
BoostInstance rotated_s();
/// Dense 5x3 attainable instance (uniform entries) used for the geometric-rate fit.
BoostInstance attainable_dense();

struct NamedFixture {
  std::string name;
  BoostInstance instance;
  Regime regime;
};
std::vector<NamedFixture> builtin_fixtures();

// Random instances.

enum class EntryKind { Sign, Uniform };  // {-1,0,1} or U[-1,1]

struct GeneratorConfig {
  long m = 4;
  long n = 3;
  EntryKind entries = EntryKind::Uniform;
  std::optional<Regime> regime;  // reject until analyze() agrees
  long max_attempts = 100000;
};

/// Deterministic for a given seed (std::mt19937_64). Mixed instances
/// require EntryKind::Sign; PreconditionError otherwise.
BoostInstance random_instance(std::uint64_t seed, const GeneratorConfig& cfg);

// Reference optima.

/// inf_lambda f(A lambda). Zero for weak-learnable instances; otherwise a
/// long run on the hard-core rows A_+, whose optimum equals that of A and
/// is attained.
double reference_objective(const BoostInstance& inst, const Loss& loss,
                           long max_iters = 100000, double grad_tol = 1e-13);

// Rate fits.

inline constexpr long kFitFirst = 5;            // skip transients
inline constexpr long kAttainableFitLast = 200;
inline constexpr double kGeometricResidualTol = 0.2;
inline constexpr long kMixedFitLast = 50;
inline constexpr long kMixedFitEval = 200;
inline constexpr double kInverseResidualTol = 0.3;
inline constexpr long kLowerBoundIters = 200;

enum class RateModel { Geometric, Inverse };
const char* to_string(RateModel model);

struct RateFit {
  RateModel model = RateModel::Inverse;
  double fitted_constant = 0.0;  // C in C q^t or C / t
  double ratio = 1.0;            // q, geometric only
  double residual = 0.0;         // max relative deviation over the window
  long t_first = 0;
  long t_last = 0;
};

/// Suboptimality f_t - f_bar for t = 1..T (index t-1).
std::vector<double> suboptimality(const Trace& trace, double f_bar);

/// Least squares on (t, log s_t) over t in [t_first, t_last].
RateFit fit_geometric(const std::vector<double>& subopt, long t_first, long t_last);
/// log C = mean of log(t s_t) over t in [t_first, t_last].
RateFit fit_inverse(const std::vector<double>& subopt, long t_first, long t_last);

// Per-step bound checks. Each returns the smallest slack over the run;
// nonnegative means the bound held at every step.

/// (f_t - f_{t+1}) - c0^2 ||grad_t||^2 / (denominator * eta * f_t).
double descent_guarantee_slack(const Trace& trace, double eta, double denominator,
                               double c0 = 1.0);
/// f_t (1 - gamma^2 / 6) + 1e-9 - f_{t+1}.
double geometric_bound_slack(const Trace& trace, double gamma, double additive = 1e-9);

/// Steps needed by the weak-learnable bound to reach `target`, times 10:
/// 10 * ceil(6 / gamma^2 * ln(f0 / target)).
long weak_learnable_iteration_budget(double gamma, double f0, double target);

// Lower-bound experiment on S.

struct LowerBoundReport {
  long iterations = 0;
  double first_step = 0.0;               // u_1
  double min_bound_slack = 0.0;          // min_t (f_t - 2 ln 2) - 1/(8t)
  double max_identity_residual = 0.0;    // |e^{2u} - e^{2v} - 2e^{v-u} - 2|
  double max_l1_excess = 0.0;            // max_t ||lambda_t||_1 - ln(4t)
  bool alternates = true;                // j_t != j_{t-1} for t >= 2
  std::vector<double> suboptimality;
};

/// Analyzes a logistic trace on S (f-bar = 2 ln 2).
LowerBoundReport analyze_lower_bound(const Trace& trace);

}  // namespace cdboost::experiments
