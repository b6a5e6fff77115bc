#include "cdboost/structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/QR>

#include "cdboost/errors.hpp"
#include "cdboost/lp.hpp"

namespace cdboost {
namespace {

constexpr double kRankTol = 1e-10;
constexpr double kClipTol = 1e-10;

lp::Outcome solve_or_throw(const lp::LinearProgram& prog, const char* what) {
  try {
    return lp::solve(prog);
  } catch (const Error& e) {
    throw Error(std::string(what) + ": " + e.what());
  }
}

// Variables psi in [0,1]^m with A^T psi = 0, plus `extra` trailing variables.
lp::LinearProgram dual_cone_program(const Matrix& a, Eigen::Index extra) {
  const Eigen::Index m = a.rows();
  auto prog = lp::LinearProgram::with_variables(m + extra, lp::Direction::Maximize);
  for (Eigen::Index i = 0; i < m; ++i) prog.set_bounds(i, 0.0, 1.0);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Vector row = Vector::Zero(m + extra);
    row.head(m) = a.col(j);
    prog.add_constraint(row, lp::Sense::Equal, 0.0);
  }
  return prog;
}

// lambda free with rows `neg` of A <= -1 and rows `zero` of A == 0.
std::optional<Vector> halfspace_witness(const Matrix& a, const RowSet& neg, const RowSet& zero) {
  auto prog = lp::LinearProgram::with_variables(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) prog.set_free(j);
  for (std::size_t i : neg) {
    prog.add_constraint(a.row(static_cast<Eigen::Index>(i)).transpose(), lp::Sense::LessEqual,
                        -1.0);
  }
  for (std::size_t i : zero) {
    prog.add_constraint(a.row(static_cast<Eigen::Index>(i)).transpose(), lp::Sense::Equal, 0.0);
  }
  const auto out = solve_or_throw(prog, "halfspace witness");
  if (out.status != lp::Status::Optimal) return std::nullopt;
  return out.x;
}

struct HardCoreResult {
  RowSet rows;
  Vector psi;  // sum of the per-row maximizers, rescaled into [0,1]
};

HardCoreResult hard_core_with_witness(const Matrix& a) {
  const Eigen::Index m = a.rows();
  std::vector<bool> known(static_cast<std::size_t>(m), false);
  std::vector<bool> in_core(static_cast<std::size_t>(m), false);
  Vector psi_sum = Vector::Zero(m);

  for (Eigen::Index i = 0; i < m; ++i) {
    if (known[static_cast<std::size_t>(i)]) continue;
    auto prog = dual_cone_program(a, 0);
    prog.objective[i] = 1.0;
    const auto out = solve_or_throw(prog, "hard core");
    if (out.status != lp::Status::Optimal) {
      throw InvariantError("hard core: LP over a bounded nonempty set was not optimal");
    }
    known[static_cast<std::size_t>(i)] = true;
    if (out.value > kFeasTol) {
      // Every row carrying weight in this maximizer is in the core too.
      for (Eigen::Index k = 0; k < m; ++k) {
        if (out.x[k] > kFeasTol) {
          in_core[static_cast<std::size_t>(k)] = true;
          known[static_cast<std::size_t>(k)] = true;
        }
      }
      psi_sum += out.x.cwiseMax(0.0);
    }
  }

  HardCoreResult res;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (in_core[static_cast<std::size_t>(i)]) res.rows.push_back(static_cast<std::size_t>(i));
  }
  const double top = psi_sum.size() > 0 ? psi_sum.maxCoeff() : 0.0;
  res.psi = top > 0.0 ? Vector(psi_sum / top) : psi_sum;
  return res;
}

RowSet complement(const RowSet& rows, std::size_t m) {
  RowSet out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (k < rows.size() && rows[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::WeakLearnable:
      return "WeakLearnable";
    case Regime::Attainable:
      return "Attainable";
    case Regime::Mixed:
      return "Mixed";
  }
  return "?";
}

WeakLearnability weak_learnable(const BoostInstance& inst) {
  RowSet all(static_cast<std::size_t>(inst.m()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  WeakLearnability out;
  out.lambda = halfspace_witness(inst.matrix(), all, {});
  out.holds = out.lambda.has_value();
  return out;
}

Attainability attainable(const BoostInstance& inst) {
  const Eigen::Index m = inst.m();
  auto prog = dual_cone_program(inst.matrix(), 1);
  prog.set_free(m);
  prog.objective[m] = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    Vector row = Vector::Zero(m + 1);
    row[i] = 1.0;
    row[m] = -1.0;
    prog.add_constraint(row, lp::Sense::GreaterEqual, 0.0);
  }
  const auto sol = solve_or_throw(prog, "attainable");
  if (sol.status != lp::Status::Optimal) {
    throw InvariantError("attainable: LP over a bounded nonempty set was not optimal");
  }
  Attainability out;
  out.tau = sol.value;
  out.holds = sol.value > kFeasTol;
  if (out.holds) out.psi = sol.x.head(m);
  return out;
}

std::optional<Vector> nonpositive_nonzero_direction(const BoostInstance& inst) {
  const Matrix& a = inst.matrix();
  auto prog = lp::LinearProgram::with_variables(a.cols(), lp::Direction::Maximize);
  for (Eigen::Index j = 0; j < a.cols(); ++j) prog.set_bounds(j, -1.0, 1.0);
  prog.objective = -a.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    prog.add_constraint(a.row(i).transpose(), lp::Sense::LessEqual, 0.0);
  }
  const auto sol = solve_or_throw(prog, "stiemke primal");
  if (sol.status != lp::Status::Optimal) {
    throw InvariantError("stiemke primal: LP over a bounded nonempty set was not optimal");
  }
  if (sol.value > kFeasTol) return sol.x;
  return std::nullopt;
}

RowSet hard_core(const BoostInstance& inst) { return hard_core_with_witness(inst.matrix()).rows; }

double gamma_classical(const BoostInstance& inst) {
  const Matrix& a = inst.matrix();
  const Eigen::Index m = a.rows();
  auto prog = lp::LinearProgram::with_variables(m + 1, lp::Direction::Minimize);
  prog.objective[m] = 1.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Vector row(m + 1);
    row.head(m) = a.col(j);
    row[m] = -1.0;
    prog.add_constraint(row, lp::Sense::LessEqual, 0.0);
    row.head(m) = -a.col(j);
    prog.add_constraint(row, lp::Sense::LessEqual, 0.0);
  }
  Vector simplex = Vector::Ones(m + 1);
  simplex[m] = 0.0;
  prog.add_constraint(simplex, lp::Sense::Equal, 1.0);
  const auto sol = solve_or_throw(prog, "gamma");
  if (sol.status != lp::Status::Optimal) {
    throw InvariantError("gamma: LP over the simplex was not optimal");
  }
  return std::max(sol.value, 0.0);
}

Matrix kernel_basis(const BoostInstance& inst) {
  const Matrix& a = inst.matrix();
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(kRankTol);
  const Eigen::Index rank = qr.rank();
  const Matrix q = qr.householderQ();
  return q.rightCols(a.rows() - rank);
}

Decomposition decompose(const BoostInstance& inst) {
  Decomposition d;
  d.rows_plus = hard_core(inst);
  d.rows_zero = complement(d.rows_plus, static_cast<std::size_t>(inst.m()));
  if (!d.rows_zero.empty()) {
    d.zero_part = inst.rows(d.rows_zero);
    if (!hard_core(*d.zero_part).empty()) {
      throw InvariantError("decompose: A_0 has a nontrivial dual feasible set");
    }
  }
  if (!d.rows_plus.empty()) {
    d.plus_part = inst.rows(d.rows_plus);
    if (!attainable(*d.plus_part).holds) {
      throw InvariantError("decompose: A_+ is not attainable");
    }
  }
  return d;
}

StructureReport analyze(const BoostInstance& inst) {
  const Matrix& a = inst.matrix();
  StructureReport rep;
  const auto core = hard_core_with_witness(a);
  const Decomposition d = decompose(inst);
  if (d.rows_plus != core.rows) {
    throw InvariantError("analyze: hard core changed between evaluations");
  }
  rep.hard_core = core.rows;
  rep.rows_plus = d.rows_plus;
  rep.rows_zero = d.rows_zero;
  if (rep.hard_core.empty()) {
    rep.regime = Regime::WeakLearnable;
  } else if (rep.hard_core.size() == static_cast<std::size_t>(inst.m())) {
    rep.regime = Regime::Attainable;
  } else {
    rep.regime = Regime::Mixed;
  }

  const bool wl = weak_learnable(inst).holds;
  if (wl != (rep.regime == Regime::WeakLearnable)) {
    throw InvariantError("analyze: Gordan alternatives disagree (tolerance trouble)");
  }

  rep.gamma_classical = gamma_classical(inst);
  if (!rep.rows_zero.empty()) {
    rep.witness_primal = halfspace_witness(a, rep.rows_zero, rep.rows_plus);
    if (!rep.witness_primal) {
      throw InvariantError("analyze: no halfspace witness for A_0 despite the decomposition");
    }
  }
  if (!rep.hard_core.empty()) rep.witness_dual = core.psi;
  return rep;
}

std::optional<DualCertificate> dual_certificate(const BoostInstance& inst, const Loss& loss,
                                                const IterateState& state) {
  if (state.dual_weights.size() != inst.m() || state.lambda.size() != inst.n()) {
    throw DimensionError("dual_certificate: state does not match instance");
  }
  const Matrix basis = kernel_basis(inst);
  const Vector projection = basis * (basis.transpose() * state.dual_weights);
  // Rounding leaves tiny negatives; anything beyond that means no certificate.
  if (projection.size() > 0 && projection.minCoeff() < -kClipTol) return std::nullopt;
  const Vector psi = projection.cwiseMax(0.0);

  DualCertificate cert;
  cert.kernel_residual = (inst.matrix().transpose() * psi).lpNorm<Eigen::Infinity>();
  if (!(cert.kernel_residual <= kFeasTol)) return std::nullopt;
  for (double p : psi) {
    if (!loss.in_conj_domain(p)) return std::nullopt;
  }
  const Risk risk(loss);
  const double conj = risk.conj(psi);
  cert.psi = psi;
  cert.dual_value = -conj;
  cert.gap_bound = risk.value(inst.margins(state.lambda)) + conj;
  return cert;
}

}  // namespace cdboost
