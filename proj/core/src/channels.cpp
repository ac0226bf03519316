#include "qbayes/channels.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "qbayes/error.hpp"
#include "qbayes/rng.hpp"

namespace qbayes {
namespace {

constexpr double kKrausFloor = 1e-14;

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw Error(ErrorKind::InvalidArgument, "channel needs a Kraus operator");
  const Eigen::Index d = kraus_.front().cols();
  Matrix total = Matrix::Zero(d, d);
  for (const auto& a : kraus_) {
    if (a.rows() != d || a.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch, "Kraus operators differ in dimension");
    }
    total += a.adjoint() * a;
  }
  const double defect = (total - qbayes::identity(static_cast<std::size_t>(d))).norm();
  if (defect > kTolerance) {
    throw Error(ErrorKind::NotTp, "sum A^dagger A misses the identity by " + std::to_string(defect));
  }
}

Matrix QuantumChannel::apply(const Matrix& rho) const {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& a : kraus_) out += a * rho * a.adjoint();
  return out;
}

DensityOperator QuantumChannel::apply(const DensityOperator& rho) const {
  return DensityOperator(hermitian_part(apply(rho.op())));
}

QuantumChannel QuantumChannel::identity_channel(std::size_t dim) {
  return QuantumChannel({qbayes::identity(dim)});
}

QuantumChannel QuantumChannel::unitary(const Matrix& u) {
  if (unitarity_defect(u) > kTolerance) throw Error(ErrorKind::NotUnitary, "not unitary");
  return QuantumChannel({u});
}

QuantumChannel QuantumChannel::fully_depolarizing(std::size_t dim) {
  // Kraus |i><j| / sqrt(D)
  std::vector<Matrix> kraus;
  const auto d = static_cast<Eigen::Index>(dim);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Matrix a = Matrix::Zero(d, d);
      a(i, j) = 1.0 / std::sqrt(static_cast<double>(dim));
      kraus.push_back(std::move(a));
    }
  }
  return QuantumChannel(std::move(kraus));
}

ChoiMatrix::ChoiMatrix(Matrix op) : op_(std::move(op)) {
  const auto n = static_cast<std::size_t>(op_.rows());
  dim_ = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (op_.rows() != op_.cols() || dim_ * dim_ != n) {
    throw Error(ErrorKind::DimensionMismatch, "Choi matrix must be D^2 x D^2");
  }
  if (hermiticity_defect(op_) > tol::kHermitian) {
    throw Error(ErrorKind::NotCp, "Choi matrix is not Hermitian");
  }
  op_ = hermitian_part(op_);
  const double lowest = min_eigenvalue(op_);
  if (lowest < -kTolerance) {
    throw Error(ErrorKind::NotCp, "Choi matrix has eigenvalue " + std::to_string(lowest));
  }
  const Matrix input = partial_trace(op_, dim_, dim_, Side::B);
  const double defect = (input - qbayes::identity(dim_) / static_cast<double>(dim_)).norm();
  if (defect > kTolerance) {
    throw Error(ErrorKind::NotTp, "output-traced Choi differs from I/D by " + std::to_string(defect));
  }
}

Vector maximally_entangled(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  Vector v = Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return v / std::sqrt(static_cast<double>(dim));
}

Matrix choi_of_map(std::size_t dim, const std::function<Matrix(const Matrix&)>& map) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix out = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Matrix unit = Matrix::Zero(d, d);
      unit(i, j) = 1.0;
      out += tensor(unit, map(unit));
    }
  }
  return out / static_cast<double>(dim);
}

ChoiMatrix channel_choi(const QuantumChannel& channel) {
  return ChoiMatrix(choi_of_map(channel.dim(), [&](const Matrix& m) { return channel.apply(m); }));
}

QuantumChannel choi_channel(const ChoiMatrix& choi) {
  const std::size_t dim = choi.dim();
  const auto d = static_cast<Eigen::Index>(dim);
  const EigDecomposition eig = eig_hermitian(choi.op());
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const double mu = eig.eigenvalues(k);
    if (mu <= kKrausFloor) continue;
    // v = sum_ij v_{iD+j} |i>|j>  ->  A|i> = sqrt(D mu) sum_j v_{iD+j} |j>
    const double scale = std::sqrt(static_cast<double>(dim) * mu);
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) a(j, i) = scale * eig.eigenvectors(i * d + j, k);
    }
    kraus.push_back(std::move(a));
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel controlled_unitary_channel(const Matrix& u0, const Matrix& u1, Complex alpha,
                                          Complex beta) {
  const double norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - 1.0) > QuantumChannel::kTolerance) {
    throw Error(ErrorKind::NotNormalized,
                "|alpha|^2 + |beta|^2 = " + std::to_string(norm) + ", expected 1");
  }
  if (u0.rows() != u1.rows() || u0.cols() != u1.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "controlled unitaries differ in dimension");
  }
  if (unitarity_defect(u0) > QuantumChannel::kTolerance ||
      unitarity_defect(u1) > QuantumChannel::kTolerance) {
    throw Error(ErrorKind::NotUnitary, "controlled operation is not unitary");
  }
  std::vector<Matrix> kraus;
  if (std::abs(alpha) > kKrausFloor) kraus.push_back(std::abs(alpha) * u0);
  if (std::abs(beta) > kKrausFloor) kraus.push_back(std::abs(beta) * u1);
  return QuantumChannel(std::move(kraus));
}

SteeringSetup SteeringSetup::random(std::uint64_t seed) {
  Xoshiro256 rng(seed);
  const Vector amplitudes = random_ket(2, rng);
  return SteeringSetup{amplitudes(0), amplitudes(1), random_unitary(2, rng), random_unitary(2, rng)};
}

SteeringReport remote_steering_experiment(const Povm& far_measurement, const SteeringSetup& setup) {
  if (far_measurement.dim() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "far measurement must act on a qubit");
  }
  const double norm = std::norm(setup.alpha) + std::norm(setup.beta);
  if (std::abs(norm - 1.0) > QuantumChannel::kTolerance) {
    throw Error(ErrorKind::NotNormalized, "steering amplitudes are not normalized");
  }
  // Shared pair on F (x) C.
  Vector pair = Vector::Zero(4);
  pair(0) = setup.alpha;
  pair(3) = setup.beta;
  const Matrix pair_op = pair * pair.adjoint();

  // Controlled gate on C (x) T.
  const Matrix gate = tensor(projector(basis_ket(2, 0)), setup.u0) +
                      tensor(projector(basis_ket(2, 1)), setup.u1);

  SteeringReport report;
  report.averaged_choi = Matrix::Zero(4, 4);
  for (const auto& effect : far_measurement.elements()) {
    const Matrix local = tensor(effect.op(), qbayes::identity(2));
    const Matrix unnormalized = partial_trace(local * pair_op, 2, 2, Side::A);
    const double p = std::max(unnormalized.trace().real(), 0.0);
    report.probabilities.push_back(p);
    Matrix choi = Matrix::Zero(4, 4);
    if (p > 1e-12) {
      const Matrix control = hermitian_part(unnormalized) / p;
      choi = choi_of_map(2, [&](const Matrix& rho) {
        return partial_trace(gate * tensor(control, rho) * gate.adjoint(), 2, 2, Side::A);
      });
    }
    report.averaged_choi += p * choi;
    report.conditional_choi.push_back(std::move(choi));
  }
  report.unconditional_choi =
      channel_choi(controlled_unitary_channel(setup.u0, setup.u1, setup.alpha, setup.beta)).op();
  report.no_signaling_defect = (report.averaged_choi - report.unconditional_choi).norm();
  return report;
}

}  // namespace qbayes
