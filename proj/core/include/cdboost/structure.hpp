#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cdboost/boost.hpp"
#include "cdboost/instance.hpp"
#include "cdboost/losses.hpp"

namespace cdboost {

/// Strictness threshold shared by every structural LP test.
inline constexpr double kFeasTol = 1e-8;

enum class Regime { WeakLearnable, Attainable, Mixed };

const char* to_string(Regime regime);

using RowSet = std::vector<std::size_t>;  // sorted, 0-based

struct WeakLearnability {
  bool holds = false;
  std::optional<Vector> lambda;  // A lambda <= -1 when holds
};

struct Attainability {
  bool holds = false;
  std::optional<Vector> psi;  // psi >= tau* 1, A^T psi = 0, psi <= 1 when holds
  double tau = 0.0;
};

/// Gordan alternative: feasibility of {lambda : A lambda <= -1}. The strict
/// system A lambda < 0 is a cone, so margin 1 loses nothing.
WeakLearnability weak_learnable(const BoostInstance& inst);

/// Stiemke alternative: max tau s.t. A^T psi = 0, tau <= psi_i <= 1.
Attainability attainable(const BoostInstance& inst);

/// Some lambda in [-1,1]^n with A lambda <= 0 and A lambda != 0, if any
/// (the primal side of the Stiemke alternative).
std::optional<Vector> nonpositive_nonzero_direction(const BoostInstance& inst);

/// H(A): rows i with max { psi_i : A^T psi = 0, 0 <= psi <= 1 } > kFeasTol.
RowSet hard_core(const BoostInstance& inst);

/// min_{phi >= 0, sum phi = 1} ||A^T phi||_inf, the classical weak learning rate.
double gamma_classical(const BoostInstance& inst);

/// Orthonormal basis (columns) of Ker(A^T), via column-pivoted QR of A with
/// rank tolerance 1e-10 times the largest column norm. May have zero columns.
Matrix kernel_basis(const BoostInstance& inst);

struct Decomposition {
  std::optional<BoostInstance> zero_part;  // A_0, rows outside the hard core
  std::optional<BoostInstance> plus_part;  // A_+, rows of the hard core
  RowSet rows_zero;
  RowSet rows_plus;
};

/// Row partition A = [A_0; A_+] with rows_plus = H(A). Verifies that A_0
/// has a trivial dual feasible set and that A_+ is attainable; throws
/// InvariantError otherwise.
Decomposition decompose(const BoostInstance& inst);

struct StructureReport {
  Regime regime = Regime::Mixed;
  RowSet hard_core;
  RowSet rows_zero;
  RowSet rows_plus;
  double gamma_classical = 0.0;
  /// A_0 lambda <= -1 and A_+ lambda = 0; absent when A_0 is empty.
  std::optional<Vector> witness_primal;
  /// psi in Phi_A, strictly positive exactly on the hard core; absent when
  /// the hard core is empty.
  std::optional<Vector> witness_dual;
};

/// Full classification. Cross-checks the Gordan LP against the hard core and
/// throws InvariantError when the two alternatives disagree.
StructureReport analyze(const BoostInstance& inst);

struct DualCertificate {
  Vector psi;
  double dual_value = 0.0;  // -f*(psi)
  double gap_bound = 0.0;   // f(A lambda) + f*(psi)
  double kernel_residual = 0.0;  // ||A^T psi||_inf
};

/// Projects the dual weights onto Ker(A^T), clips negatives of size at most
/// 1e-10 to zero, and returns a certificate if the clipped point is still in
/// Ker(A^T) (to kFeasTol) and inside dom(f*). Absent otherwise.
std::optional<DualCertificate> dual_certificate(const BoostInstance& inst, const Loss& loss,
                                                const IterateState& state);

}  // namespace cdboost
