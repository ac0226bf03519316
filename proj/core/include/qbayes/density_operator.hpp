#pragma once

#include <cstddef>

#include "qbayes/linalg.hpp"

namespace qbayes {

/// A density operator: Hermitian, positive semidefinite within 1e-10 and
/// of unit trace within 1e-9. Construction validates and stores the
/// Hermitian part; a failed check raises NotAState.
class DensityOperator {
 public:
  static constexpr double kTraceTolerance = 1e-9;

  explicit DensityOperator(Matrix op);

  static DensityOperator pure(const Vector& ket);
  static DensityOperator maximally_mixed(std::size_t dim);

  const Matrix& op() const noexcept { return op_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(op_.rows()); }

  /// Eigenvalues in descending order.
  RealVector spectrum() const;

 private:
  Matrix op_;
};

/// Outcome of testing a reconstructed Hermitian operator for membership in
/// the state space. Eigenvalues down to -kFloor count as numerical noise.
struct StateCheck {
  static constexpr double kFloor = 1e-8;

  double min_eigenvalue = 0.0;
  double trace = 0.0;
  bool ok = false;
};

StateCheck check_state(const Matrix& hermitian);

/// Clamp the negative eigenvalues of a Hermitian operator that passed
/// check_state and renormalize the trace. Raises NotAState otherwise.
DensityOperator clamp_to_state(const Matrix& hermitian);

DensityOperator random_state(std::size_t dim, Xoshiro256& rng);
DensityOperator random_pure_state(std::size_t dim, Xoshiro256& rng);

}  // namespace qbayes
