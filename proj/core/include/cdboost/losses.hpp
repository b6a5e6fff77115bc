#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

namespace cdboost {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class LossKind { Exponential, Logistic };

/// Curvature constants of a loss in the family used by the rate bounds:
/// g''(x) <= eta * g(x) and g(x) <= beta * g'(x) on the initial level set.
struct LossConstants {
  double eta = 1.0;
  double beta = 1.0;
  /// Set when 2^m overflowed and the constants were capped at +inf.
  bool capped = false;
};

/// Exponential: eta = beta = 1. Logistic: eta = 2^m / (m ln 2), beta = 1 + 2^m.
/// Throws DomainError when m <= 0.
LossConstants loss_constants(LossKind kind, long m);

/// A scalar loss g (exp or softplus) together with its derivatives, its
/// Fenchel conjugate and the constants eta/beta for a sample of size m.
/// Immutable; every member is pure.
class Loss {
 public:
  Loss(LossKind kind, long sample_size);

  /// "exp" | "logistic"; throws ValidationError otherwise.
  static Loss from_name(std::string_view name, long sample_size);
  static LossKind kind_from_name(std::string_view name);

  LossKind kind() const { return kind_; }
  std::string_view name() const;
  long sample_size() const { return m_; }
  double eta() const { return constants_.eta; }
  double beta() const { return constants_.beta; }
  bool constants_capped() const { return constants_.capped; }

  /// g(x). Logistic uses max(x,0) + log1p(exp(-|x|)).
  double value(double x) const;
  /// g'(x) > 0.
  double grad(double x) const;
  /// g''(x) > 0.
  double hess(double x) const;

  /// g*(phi); +inf outside dom(g*) = [0,inf) (exp) or [0,1] (logistic).
  double conj(double phi) const;
  /// grad g*(phi) on the interior of dom(g*); DomainError elsewhere.
  double conj_grad(double phi) const;
  /// Right end of dom(g*) (+inf for exp).
  double conj_domain_upper() const;
  bool in_conj_domain(double phi) const;

 private:
  LossKind kind_;
  long m_;
  LossConstants constants_;
};

/// Empirical risk f(x) = sum_i g(x_i) and its conjugate f*(psi) = sum_i g*(psi_i).
class Risk {
 public:
  explicit Risk(Loss loss) : loss_(loss) {}

  const Loss& loss() const { return loss_; }
  long m() const { return loss_.sample_size(); }

  /// f(margins). For the exponential loss with some margin above 30 the sum
  /// is accumulated in the log domain.
  double value(const Vector& margins) const;
  /// log f(margins), stable for large exponential margins.
  double log_value(const Vector& margins) const;
  /// grad f(margins), coordinate-wise g'(x_i).
  Vector grad(const Vector& margins) const;
  /// f*(psi), +inf when some coordinate is outside dom(g*).
  double conj(const Vector& psi) const;

 private:
  void check(const Vector& v) const;

  Loss loss_;
};

}  // namespace cdboost
