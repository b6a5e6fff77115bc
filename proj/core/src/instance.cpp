#include "cdboost/instance.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "cdboost/errors.hpp"

namespace cdboost {
namespace {

constexpr int kMaxListedEntries = 10;

void check_box(const Matrix& a, const char* what) {
  std::ostringstream bad;
  int count = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      if (std::isfinite(v) && v >= -1.0 && v <= 1.0) continue;
      if (count < kMaxListedEntries) bad << " (" << i << "," << j << ")=" << v;
      ++count;
    }
  }
  if (count > 0) {
    std::ostringstream msg;
    msg << what << ": " << count << " entries outside [-1,1]:" << bad.str();
    if (count > kMaxListedEntries) msg << " ...";
    throw ValidationError(msg.str());
  }
}

}  // namespace

BoostInstance::BoostInstance(Matrix a) : a_(std::move(a)) {
  if (a_.rows() < 1 || a_.cols() < 1) {
    throw ValidationError("instance: matrix must have m >= 1 and n >= 1");
  }
  check_box(a_, "instance");
}

Vector BoostInstance::margins(const Vector& lambda) const {
  if (lambda.size() != a_.cols()) {
    throw DimensionError("margins: lambda has length " + std::to_string(lambda.size()) +
                         ", expected " + std::to_string(a_.cols()));
  }
  if (!lambda.allFinite()) throw DomainError("margins: lambda must be finite");
  return a_ * lambda;
}

TrainingError BoostInstance::training_error(const Vector& lambda) const {
  const Vector x = margins(lambda);
  TrainingError err;
  err.total = m();
  err.errors = static_cast<long>((x.array() >= 0.0).count());
  return err;
}

BoostInstance BoostInstance::rows(const std::vector<std::size_t>& which) const {
  Matrix sub(static_cast<Eigen::Index>(which.size()), a_.cols());
  for (std::size_t r = 0; r < which.size(); ++r) {
    if (which[r] >= static_cast<std::size_t>(a_.rows())) {
      throw DimensionError("rows: index out of range");
    }
    sub.row(static_cast<Eigen::Index>(r)) = a_.row(static_cast<Eigen::Index>(which[r]));
  }
  return BoostInstance(std::move(sub));
}

BoostInstance build_instance(const LabeledSample& sample) {
  const auto m = static_cast<Eigen::Index>(sample.labels.size());
  if (sample.predictions.rows() != m) {
    throw ValidationError("build_instance: " + std::to_string(m) + " labels but " +
                          std::to_string(sample.predictions.rows()) + " prediction rows");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const int y = sample.labels[static_cast<std::size_t>(i)];
    if (y != 1 && y != -1) {
      throw ValidationError("build_instance: label " + std::to_string(i) + " is " +
                            std::to_string(y) + ", expected -1 or +1");
    }
  }
  check_box(sample.predictions, "build_instance");
  Matrix a(sample.predictions.rows(), sample.predictions.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    a.row(i) = -static_cast<double>(sample.labels[static_cast<std::size_t>(i)]) *
               sample.predictions.row(i);
  }
  return BoostInstance(std::move(a));
}

}  // namespace cdboost
