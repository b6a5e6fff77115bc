#include <random>
#include <string>

#include <gtest/gtest.h>

#include "cdboost/errors.hpp"
#include "cdboost/instance.hpp"

using namespace cdboost;

namespace {

Matrix s_matrix() {
  Matrix a(3, 2);
  a << -1, 1, 1, -1, -1, -1;
  return a;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

}  // namespace

TEST(BuildInstance, SignConventions) {
  LabeledSample one{{1}, Matrix::Constant(1, 1, 1.0)};
  EXPECT_EQ(build_instance(one).matrix(), Matrix::Constant(1, 1, -1.0));

  LabeledSample two{{1, -1}, Matrix::Constant(2, 1, 1.0)};
  Matrix expected(2, 1);
  expected << -1, 1;
  EXPECT_EQ(build_instance(two).matrix(), expected);
}

TEST(BuildInstance, ProducesS) {
  // Third example: label -1, both learners predict -1 (both correct).
  LabeledSample s{{1, 1, -1}, Matrix(3, 2)};
  s.predictions << 1, -1, -1, 1, -1, -1;
  EXPECT_EQ(build_instance(s).matrix(), s_matrix());
  // Both learners wrong on that example flips the row to (+1,+1).
  s.predictions.row(2) << 1, 1;
  EXPECT_EQ(build_instance(s).matrix().row(2), Eigen::RowVector2d(1, 1));
}

TEST(BuildInstance, RejectsBadInput) {
  LabeledSample bad_label{{1, 0}, Matrix::Zero(2, 1)};
  EXPECT_THROW(build_instance(bad_label), ValidationError);
  LabeledSample bad_range{{1}, Matrix::Constant(1, 2, 1.5)};
  EXPECT_THROW(build_instance(bad_range), ValidationError);
  LabeledSample bad_dims{{1, -1, 1}, Matrix::Zero(2, 2)};
  EXPECT_THROW(build_instance(bad_dims), ValidationError);
}

TEST(BoostInstance, ValidatesBoxAndShape) {
  EXPECT_THROW(BoostInstance(Matrix(0, 2)), ValidationError);
  EXPECT_THROW(BoostInstance(Matrix(2, 0)), ValidationError);
  Matrix a = Matrix::Zero(3, 3);
  a(1, 2) = 1.0 + 1e-15;
  a(2, 0) = -2.0;
  try {
    BoostInstance inst(a);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("(1,2)"), std::string::npos) << msg;
    EXPECT_NE(msg.find("(2,0)"), std::string::npos) << msg;
  }
  a(1, 2) = std::numeric_limits<double>::quiet_NaN();
  a(2, 0) = 0.0;
  EXPECT_THROW(BoostInstance{a}, ValidationError);
  Matrix dup(2, 2);
  dup << -1, -1, 1, 1;
  EXPECT_NO_THROW(BoostInstance{dup});
}

TEST(BoostInstance, Margins) {
  const BoostInstance s(s_matrix());
  EXPECT_EQ(s.margins(vec({0, 0})), Vector::Zero(3));
  EXPECT_EQ(s.margins(vec({1, 1})), vec({0, 0, -2}));
  EXPECT_EQ(BoostInstance(Matrix::Constant(1, 1, -1.0)).margins(vec({3})), vec({-3}));
  EXPECT_THROW(s.margins(vec({1, 2, 3})), DimensionError);
}

TEST(BoostInstance, TrainingErrorCountsTies) {
  const BoostInstance s(s_matrix());
  auto err = s.training_error(vec({1, 1}));
  EXPECT_EQ(err.errors, 2);
  EXPECT_EQ(err.total, 3);
  EXPECT_DOUBLE_EQ(err.value(), 2.0 / 3.0);
  EXPECT_EQ(BoostInstance(Matrix::Constant(1, 1, -1.0)).training_error(vec({1})).value(), 0.0);
  EXPECT_EQ(s.training_error(vec({0, 0})).value(), 1.0);
  EXPECT_THROW(s.training_error(vec({1})), DimensionError);
}

TEST(BoostInstance, RowsSubset) {
  const BoostInstance s(s_matrix());
  const BoostInstance top = s.rows({0, 1});
  EXPECT_EQ(top.m(), 2);
  EXPECT_EQ(top.matrix(), s_matrix().topRows(2));
  EXPECT_EQ(s.rows({2}).matrix(), s_matrix().row(2));
}

TEST(InstanceProperty, MarginsMatchLabeledSample) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pred(-1.0, 1.0);
  std::uniform_real_distribution<double> weight(-5.0, 5.0);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 7;
    const int n = 1 + trial % 5;
    LabeledSample s{std::vector<int>(m), Matrix(m, n)};
    for (int i = 0; i < m; ++i) {
      s.labels[i] = coin(rng) ? 1 : -1;
      for (int j = 0; j < n; ++j) s.predictions(i, j) = pred(rng);
    }
    Vector lambda(n);
    for (int j = 0; j < n; ++j) lambda[j] = weight(rng);
    const Vector x = build_instance(s).margins(lambda);
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += lambda[j] * s.predictions(i, j);
      EXPECT_NEAR(x[i], -s.labels[i] * acc, 1e-12);
    }
  }
}
