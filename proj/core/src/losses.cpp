#include "cdboost/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cdboost/errors.hpp"

namespace cdboost {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogDomainThreshold = 30.0;

void require_finite(double x, const char* op) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(op) + ": non-finite argument");
  }
}

// Logistic sigmoid without overflow on either tail.
double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// x log x with the convention 0 log 0 = 0.
double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

}  // namespace

LossConstants loss_constants(LossKind kind, long m) {
  if (m <= 0) {
    throw DomainError("loss_constants: sample size must be positive");
  }
  LossConstants c;
  if (kind == LossKind::Exponential) {
    return c;
  }
  const double pow2 = std::ldexp(1.0, static_cast<int>(std::min<long>(m, 4096)));
  if (!std::isfinite(pow2)) {
    c.eta = kInf;
    c.beta = kInf;
    c.capped = true;
    return c;
  }
  c.eta = pow2 / (static_cast<double>(m) * std::numbers::ln2);
  c.beta = 1.0 + pow2;
  return c;
}

Loss::Loss(LossKind kind, long sample_size)
    : kind_(kind), m_(sample_size), constants_(loss_constants(kind, sample_size)) {}

LossKind Loss::kind_from_name(std::string_view name) {
  if (name == "exp" || name == "exponential") return LossKind::Exponential;
  if (name == "logistic") return LossKind::Logistic;
  throw ValidationError("unknown loss '" + std::string(name) + "' (expected exp|logistic)");
}

Loss Loss::from_name(std::string_view name, long sample_size) {
  return Loss(kind_from_name(name), sample_size);
}

std::string_view Loss::name() const {
  return kind_ == LossKind::Exponential ? "exp" : "logistic";
}

double Loss::value(double x) const {
  require_finite(x, "loss_eval");
  if (kind_ == LossKind::Exponential) return std::exp(x);
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double Loss::grad(double x) const {
  require_finite(x, "loss_grad");
  if (kind_ == LossKind::Exponential) return std::exp(x);
  return sigmoid(x);
}

double Loss::hess(double x) const {
  require_finite(x, "loss_hess");
  if (kind_ == LossKind::Exponential) return std::exp(x);
  // sigma(x) * sigma(-x) keeps full relative precision on both tails.
  return sigmoid(x) * sigmoid(-x);
}

double Loss::conj_domain_upper() const {
  return kind_ == LossKind::Exponential ? kInf : 1.0;
}

bool Loss::in_conj_domain(double phi) const {
  return !std::isnan(phi) && phi >= 0.0 && phi <= conj_domain_upper();
}

double Loss::conj(double phi) const {
  if (!in_conj_domain(phi)) return kInf;
  if (kind_ == LossKind::Exponential) {
    if (std::isinf(phi)) return kInf;
    return xlogx(phi) - phi;
  }
  // Fermi-Dirac entropy; log1p keeps (1-phi) log(1-phi) accurate for small phi.
  const double tail = phi == 1.0 ? 0.0 : (1.0 - phi) * std::log1p(-phi);
  return xlogx(phi) + tail;
}

double Loss::conj_grad(double phi) const {
  if (!(phi > 0.0 && phi < conj_domain_upper()) || std::isinf(phi)) {
    throw DomainError("conj_grad: argument outside the interior of dom(g*)");
  }
  if (kind_ == LossKind::Exponential) return std::log(phi);
  return std::log(phi) - std::log1p(-phi);
}

void Risk::check(const Vector& v) const {
  if (v.size() != m()) {
    throw DimensionError("risk: expected length " + std::to_string(m()) + ", got " +
                         std::to_string(v.size()));
  }
}

double Risk::log_value(const Vector& margins) const {
  check(margins);
  if (loss_.kind() == LossKind::Exponential) {
    for (double x : margins) require_finite(x, "risk_eval");
    const double top = margins.maxCoeff();
    return top + std::log((margins.array() - top).exp().sum());
  }
  return std::log(value(margins));
}

double Risk::value(const Vector& margins) const {
  check(margins);
  if (loss_.kind() == LossKind::Exponential && margins.maxCoeff() > kLogDomainThreshold) {
    return std::exp(log_value(margins));
  }
  double total = 0.0;
  for (double x : margins) total += loss_.value(x);
  return total;
}

Vector Risk::grad(const Vector& margins) const {
  check(margins);
  Vector out(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) out[i] = loss_.grad(margins[i]);
  return out;
}

double Risk::conj(const Vector& psi) const {
  check(psi);
  double total = 0.0;
  for (double p : psi) {
    const double v = loss_.conj(p);
    if (std::isinf(v)) return kInf;
    total += v;
  }
  return total;
}

}  // namespace cdboost
