#include "qbayes/density_operator.hpp"

#include <cmath>
#include <string>

#include "qbayes/error.hpp"

namespace qbayes {

DensityOperator::DensityOperator(Matrix op) : op_(std::move(op)) {
  if (op_.rows() != op_.cols() || op_.rows() == 0) {
    throw Error(ErrorKind::NotAState, "density operator must be a nonempty square matrix");
  }
  if (hermiticity_defect(op_) > tol::kHermitian) {
    throw Error(ErrorKind::NotAState, "operator is not Hermitian");
  }
  op_ = 0.5 * (op_ + op_.adjoint());
  const double trace = op_.trace().real();
  if (std::abs(trace - 1.0) > kTraceTolerance) {
    throw Error(ErrorKind::NotAState, "trace is " + std::to_string(trace));
  }
  const double lambda_min = min_eigenvalue(op_);
  if (lambda_min < -tol::kPsd) {
    throw Error(ErrorKind::NotAState, "minimum eigenvalue " + std::to_string(lambda_min));
  }
}

DensityOperator DensityOperator::pure(const Vector& ket) { return DensityOperator(projector(ket)); }

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  return DensityOperator(identity(dim) / static_cast<double>(dim));
}

RealVector DensityOperator::spectrum() const { return eig_hermitian(op_).eigenvalues; }

StateCheck check_state(const Matrix& hermitian) {
  StateCheck check;
  check.trace = hermitian.trace().real();
  check.min_eigenvalue = min_eigenvalue(hermitian);
  check.ok = check.min_eigenvalue >= -StateCheck::kFloor &&
             std::abs(check.trace - 1.0) <= StateCheck::kFloor;
  return check;
}

DensityOperator clamp_to_state(const Matrix& hermitian) {
  const StateCheck check = check_state(hermitian);
  if (!check.ok) {
    throw Error(ErrorKind::NotAState, "minimum eigenvalue " + std::to_string(check.min_eigenvalue) +
                                          ", trace " + std::to_string(check.trace));
  }
  Matrix clamped = hermitian_fn(hermitian, [](double x) { return x > 0.0 ? x : 0.0; });
  clamped /= clamped.trace().real();
  return DensityOperator(std::move(clamped));
}

DensityOperator random_state(std::size_t dim, Xoshiro256& rng) {
  return DensityOperator(random_density_matrix(dim, rng));
}

DensityOperator random_pure_state(std::size_t dim, Xoshiro256& rng) {
  return DensityOperator::pure(random_ket(dim, rng));
}

}  // namespace qbayes
