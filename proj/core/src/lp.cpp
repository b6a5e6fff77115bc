#include "cdboost/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cdboost/errors.hpp"

namespace cdboost::lp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// How an original variable is expressed through nonnegative columns.
enum class VarMap { Shift, Mirror, Split };

struct VarInfo {
  VarMap map;
  Eigen::Index column;  // first standard-form column
  double offset;        // lo for Shift, hi for Mirror
};

// Standard form: min c^T y  s.t.  T y = b, y >= 0, b >= 0, tableau kept in
// canonical form with respect to `basis`.
class Tableau {
 public:
  Tableau(Matrix rows, Vector rhs, std::vector<Eigen::Index> basis, const Tolerances& tol)
      : t_(std::move(rows)), b_(std::move(rhs)), basis_(std::move(basis)), tol_(tol) {}

  Eigen::Index rows() const { return t_.rows(); }
  Eigen::Index cols() const { return t_.cols(); }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  long pivots() const { return pivots_; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    const double p = t_(r, c);
    t_.row(r) /= p;
    b_[r] /= p;
    t_(r, c) = 1.0;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f == 0.0) continue;
      t_.row(i) -= f * t_.row(r);
      b_[i] -= f * b_[r];
      t_(i, c) = 0.0;
    }
    basis_[static_cast<std::size_t>(r)] = c;
    ++pivots_;
    if (pivots_ > tol_.max_pivots) throw ConvergenceError("simplex: pivot budget exhausted");
  }

  // Minimizes cost^T y over the columns flagged in `allowed`. Returns false
  // when the objective is unbounded below.
  bool optimize(const Vector& cost, const std::vector<bool>& allowed) {
    for (;;) {
      const Vector reduced = reduced_costs(cost);
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < cols(); ++j) {
        if (allowed[static_cast<std::size_t>(j)] && reduced[j] < -tol_.optimality) {
          entering = j;  // Bland: lowest index
          break;
        }
      }
      if (entering < 0) return true;

      Eigen::Index leaving = -1;
      double best_ratio = kInf;
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = t_(i, entering);
        if (a <= tol_.pivot) continue;
        const double ratio = std::max(b_[i], 0.0) / a;
        const bool better =
            leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[static_cast<std::size_t>(i)] <
                                        basis_[static_cast<std::size_t>(leaving)]);
        if (better) {
          best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  Vector reduced_costs(const Vector& cost) const {
    Vector cb(rows());
    for (Eigen::Index i = 0; i < rows(); ++i) cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
    return cost - t_.transpose() * cb;
  }

  double objective(const Vector& cost) const {
    double z = 0.0;
    for (Eigen::Index i = 0; i < rows(); ++i) z += cost[basis_[static_cast<std::size_t>(i)]] * b_[i];
    return z;
  }

  // Pivots basic columns >= first_banned out of the basis; rows where that
  // is impossible are linearly dependent and get dropped.
  void expel(Eigen::Index first_banned) {
    for (Eigen::Index i = 0; i < rows();) {
      if (basis_[static_cast<std::size_t>(i)] < first_banned) {
        ++i;
        continue;
      }
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < first_banned; ++j) {
        if (std::abs(t_(i, j)) > tol_.pivot) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
        ++i;
      } else {
        drop_row(i);
      }
    }
  }

  Vector solution() const {
    Vector y = Vector::Zero(cols());
    for (Eigen::Index i = 0; i < rows(); ++i) y[basis_[static_cast<std::size_t>(i)]] = b_[i];
    return y;
  }

 private:
  void drop_row(Eigen::Index r) {
    const Eigen::Index last = rows() - 1;
    if (r != last) {
      t_.row(r) = t_.row(last);
      b_[r] = b_[last];
      basis_[static_cast<std::size_t>(r)] = basis_[static_cast<std::size_t>(last)];
    }
    t_.conservativeResize(last, Eigen::NoChange);
    b_.conservativeResize(last);
    basis_.pop_back();
  }

  Matrix t_;
  Vector b_;
  std::vector<Eigen::Index> basis_;
  Tolerances tol_;
  long pivots_ = 0;
};

double residual(const LinearProgram& lp, const Vector& x) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < lp.num_variables(); ++k) {
    worst = std::max({worst, lp.lower[k] - x[k], x[k] - lp.upper[k]});
  }
  const Vector ax = lp.constraints * x;
  for (Eigen::Index k = 0; k < lp.num_constraints(); ++k) {
    const double d = ax[k] - lp.rhs[k];
    switch (lp.senses[static_cast<std::size_t>(k)]) {
      case Sense::LessEqual:
        worst = std::max(worst, d);
        break;
      case Sense::GreaterEqual:
        worst = std::max(worst, -d);
        break;
      case Sense::Equal:
        worst = std::max(worst, std::abs(d));
        break;
    }
  }
  return worst;
}

}  // namespace

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "Optimal";
    case Status::Infeasible:
      return "Infeasible";
    case Status::Unbounded:
      return "Unbounded";
  }
  return "?";
}

LinearProgram LinearProgram::with_variables(Eigen::Index n, Direction direction) {
  LinearProgram lp;
  lp.direction = direction;
  lp.objective = Vector::Zero(n);
  lp.constraints = Matrix(0, n);
  lp.rhs = Vector(0);
  lp.lower = Vector::Zero(n);
  lp.upper = Vector::Constant(n, kInf);
  return lp;
}

void LinearProgram::add_constraint(const Vector& row, Sense sense, double value) {
  if (row.size() != num_variables()) throw DimensionError("lp: constraint row has wrong length");
  const Eigen::Index k = constraints.rows();
  constraints.conservativeResize(k + 1, num_variables());
  constraints.row(k) = row.transpose();
  rhs.conservativeResize(k + 1);
  rhs[k] = value;
  senses.push_back(sense);
}

void LinearProgram::set_free(Eigen::Index var) { set_bounds(var, -kInf, kInf); }

void LinearProgram::set_bounds(Eigen::Index var, double lo, double hi) {
  if (var < 0 || var >= num_variables()) throw DimensionError("lp: variable index out of range");
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) throw DomainError("lp: empty bound interval");
  lower[var] = lo;
  upper[var] = hi;
}

void LinearProgram::validate() const {
  const Eigen::Index n = num_variables();
  if (constraints.cols() != n || lower.size() != n || upper.size() != n ||
      rhs.size() != constraints.rows() ||
      static_cast<Eigen::Index>(senses.size()) != constraints.rows()) {
    throw DimensionError("lp: inconsistent dimensions");
  }
  if (!objective.allFinite() || !constraints.allFinite() || !rhs.allFinite()) {
    throw DomainError("lp: non-finite data");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::isnan(lower[k]) || std::isnan(upper[k]) || lower[k] == kInf ||
        upper[k] == -kInf) {
      throw DomainError("lp: invalid bounds for variable " + std::to_string(k));
    }
  }
}

Outcome solve(const LinearProgram& lp, const Tolerances& tol) {
  lp.validate();
  const Eigen::Index n = lp.num_variables();
  Outcome out;

  for (Eigen::Index k = 0; k < n; ++k) {
    if (lp.lower[k] > lp.upper[k]) return out;  // empty box
  }

  // Map variables onto nonnegative columns.
  std::vector<VarInfo> vars(static_cast<std::size_t>(n));
  Eigen::Index ny = 0;
  std::vector<std::pair<Eigen::Index, double>> upper_rows;  // (column, width)
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lo = lp.lower[k];
    const double hi = lp.upper[k];
    auto& v = vars[static_cast<std::size_t>(k)];
    if (std::isfinite(lo)) {
      v = {VarMap::Shift, ny++, lo};
      if (std::isfinite(hi)) upper_rows.emplace_back(v.column, hi - lo);
    } else if (std::isfinite(hi)) {
      v = {VarMap::Mirror, ny++, hi};
    } else {
      v = {VarMap::Split, ny, 0.0};
      ny += 2;
    }
  }

  // Constraint rows in y, with the constant part folded into the rhs.
  const Eigen::Index mc = lp.num_constraints();
  const Eigen::Index mr = mc + static_cast<Eigen::Index>(upper_rows.size());
  Matrix rows = Matrix::Zero(mr, ny);
  Vector rhs(mr);
  std::vector<Sense> senses(static_cast<std::size_t>(mr));
  Vector cost = Vector::Zero(ny);
  const double sign = lp.direction == Direction::Maximize ? -1.0 : 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& v = vars[static_cast<std::size_t>(k)];
    const double ck = sign * lp.objective[k];
    switch (v.map) {
      case VarMap::Shift:
        cost[v.column] = ck;
        break;
      case VarMap::Mirror:
        cost[v.column] = -ck;
        break;
      case VarMap::Split:
        cost[v.column] = ck;
        cost[v.column + 1] = -ck;
        break;
    }
  }
  for (Eigen::Index r = 0; r < mc; ++r) {
    double b = lp.rhs[r];
    for (Eigen::Index k = 0; k < n; ++k) {
      const double a = lp.constraints(r, k);
      if (a == 0.0) continue;
      const auto& v = vars[static_cast<std::size_t>(k)];
      switch (v.map) {
        case VarMap::Shift:
          rows(r, v.column) = a;
          b -= a * v.offset;
          break;
        case VarMap::Mirror:
          rows(r, v.column) = -a;
          b -= a * v.offset;
          break;
        case VarMap::Split:
          rows(r, v.column) = a;
          rows(r, v.column + 1) = -a;
          break;
      }
    }
    rhs[r] = b;
    senses[static_cast<std::size_t>(r)] = lp.senses[static_cast<std::size_t>(r)];
  }
  for (std::size_t u = 0; u < upper_rows.size(); ++u) {
    const Eigen::Index r = mc + static_cast<Eigen::Index>(u);
    rows(r, upper_rows[u].first) = 1.0;
    rhs[r] = upper_rows[u].second;
    senses[static_cast<std::size_t>(r)] = Sense::LessEqual;
  }

  // Flip rows to b >= 0, then add slacks and artificials.
  for (Eigen::Index r = 0; r < mr; ++r) {
    if (rhs[r] < 0.0) {
      rows.row(r) *= -1.0;
      rhs[r] = -rhs[r];
      auto& s = senses[static_cast<std::size_t>(r)];
      if (s == Sense::LessEqual) {
        s = Sense::GreaterEqual;
      } else if (s == Sense::GreaterEqual) {
        s = Sense::LessEqual;
      }
    }
  }
  Eigen::Index n_slack = 0;
  Eigen::Index n_art = 0;
  for (Sense s : senses) {
    if (s != Sense::Equal) ++n_slack;
    if (s != Sense::LessEqual) ++n_art;
  }
  const Eigen::Index first_art = ny + n_slack;
  const Eigen::Index total = first_art + n_art;
  Matrix t = Matrix::Zero(mr, total);
  t.leftCols(ny) = rows;
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(mr));
  Eigen::Index next_slack = ny;
  Eigen::Index next_art = first_art;
  for (Eigen::Index r = 0; r < mr; ++r) {
    const Sense s = senses[static_cast<std::size_t>(r)];
    if (s == Sense::LessEqual) {
      t(r, next_slack) = 1.0;
      basis[static_cast<std::size_t>(r)] = next_slack++;
    } else {
      if (s == Sense::GreaterEqual) t(r, next_slack++) = -1.0;
      t(r, next_art) = 1.0;
      basis[static_cast<std::size_t>(r)] = next_art++;
    }
  }

  Tableau tab(std::move(t), rhs, std::move(basis), tol);

  if (n_art > 0) {
    Vector phase1 = Vector::Zero(total);
    phase1.tail(n_art).setOnes();
    const std::vector<bool> all(static_cast<std::size_t>(total), true);
    tab.optimize(phase1, all);
    const double infeasibility = tab.objective(phase1);
    if (infeasibility > tol.feasibility) {
      out.pivots = tab.pivots();
      return out;
    }
    tab.expel(first_art);
  }

  Vector cost2 = Vector::Zero(total);
  cost2.head(ny) = cost;
  std::vector<bool> allowed(static_cast<std::size_t>(total), false);
  std::fill(allowed.begin(), allowed.begin() + first_art, true);
  const bool bounded = tab.optimize(cost2, allowed);
  out.pivots = tab.pivots();
  if (!bounded) {
    out.status = Status::Unbounded;
    return out;
  }

  const Vector y = tab.solution();
  out.x.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& v = vars[static_cast<std::size_t>(k)];
    switch (v.map) {
      case VarMap::Shift:
        out.x[k] = v.offset + y[v.column];
        break;
      case VarMap::Mirror:
        out.x[k] = v.offset - y[v.column];
        break;
      case VarMap::Split:
        out.x[k] = y[v.column] - y[v.column + 1];
        break;
    }
  }
  out.status = Status::Optimal;
  out.value = lp.objective.dot(out.x);
  out.max_residual = residual(lp, out.x);
  return out;
}

}  // namespace cdboost::lp
