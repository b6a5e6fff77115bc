#pragma once

#include <cstddef>
#include <vector>

#include "cdboost/losses.hpp"

namespace cdboost {

/// Labels y_i in {-1,+1} and weak-learner predictions h_j(x_i) in [-1,1].
struct LabeledSample {
  std::vector<int> labels;
  Matrix predictions;  // m x n
};

/// Fraction of examples with nonnegative (Aλ)_i, kept as a ratio.
struct TrainingError {
  long errors = 0;
  long total = 0;
  double value() const { return total == 0 ? 0.0 : static_cast<double>(errors) / total; }
};

/// The boosting matrix A, entry (i,j) = -y_i h_j(x_i), every entry in [-1,1].
class BoostInstance {
 public:
  /// Validates shape (m,n >= 1) and the [-1,1] box; ValidationError lists
  /// the offending entries.
  explicit BoostInstance(Matrix a);

  const Matrix& matrix() const { return a_; }
  long m() const { return static_cast<long>(a_.rows()); }
  long n() const { return static_cast<long>(a_.cols()); }

  /// Aλ. The loss consumes these values; the classifier margin is -(Aλ)_i.
  Vector margins(const Vector& lambda) const;

  /// Examples with (Aλ)_i >= 0, ties counted as errors.
  TrainingError training_error(const Vector& lambda) const;

  /// Sub-instance made of the given rows, in order.
  BoostInstance rows(const std::vector<std::size_t>& which) const;

  bool operator==(const BoostInstance& other) const { return a_ == other.a_; }

 private:
  Matrix a_;
};

/// A = -diag(y) H. Throws ValidationError on bad labels, out-of-range
/// predictions or inconsistent dimensions.
BoostInstance build_instance(const LabeledSample& sample);

}  // namespace cdboost
