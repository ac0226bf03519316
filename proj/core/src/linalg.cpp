#include "qbayes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qbayes/error.hpp"

namespace qbayes {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": matrix is not square");
  }
}

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

Matrix EigDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Matrix identity(std::size_t dim) {
  return Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

Vector basis_ket(std::size_t dim, std::size_t index) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

Matrix projector(const Vector& ket) {
  return ket * ket.adjoint() / ket.squaredNorm();
}

namespace pauli {
Matrix I() { return identity(2); }
Matrix X() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Matrix Y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}
Matrix Z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

double frobenius(const Matrix& m) { return m.norm(); }

Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "hs_inner: operand shapes differ");
  }
  // tr(a^dagger b) without forming the product.
  return (a.conjugate().cwiseProduct(b)).sum();
}

double trace_distance(const Matrix& a, const Matrix& b) {
  const Matrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (diff + diff.adjoint()),
                                               Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double hermiticity_defect(const Matrix& m) {
  require_square(m, "hermiticity_defect");
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  return (m - m.adjoint()).norm() / norm;
}

double unitarity_defect(const Matrix& u) {
  require_square(u, "unitarity_defect");
  return (u.adjoint() * u - identity(static_cast<std::size_t>(u.rows()))).norm();
}

double min_eigenvalue(const Matrix& hermitian) {
  return eig_hermitian(hermitian).eigenvalues.minCoeff();
}

double max_eigenvalue(const Matrix& hermitian) {
  return eig_hermitian(hermitian).eigenvalues.maxCoeff();
}

EigDecomposition eig_hermitian(const Matrix& m) {
  require_square(m, "eig_hermitian");
  const double defect = hermiticity_defect(m);
  if (defect > tol::kHermitian) {
    throw Error(ErrorKind::NotHermitian,
                "relative anti-Hermitian part " + std::to_string(defect));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
  // Eigen sorts ascending; flip to descending.
  EigDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Matrix hermitian_fn(const Matrix& m, const std::function<double(double)>& f) {
  EigDecomposition eig = eig_hermitian(m);
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    eig.eigenvalues(k) = f(eig.eigenvalues(k));
  }
  return eig.reconstruct();
}

Matrix mat_fn(const Matrix& m, const std::function<double(double)>& f) {
  EigDecomposition eig = eig_hermitian(m);
  const double scale = std::max(1.0, std::abs(eig.eigenvalues(0)));
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    double& lambda = eig.eigenvalues(k);
    if (lambda < -tol::kPsd * scale) {
      throw Error(ErrorKind::NotPsd, "mat_fn: eigenvalue " + std::to_string(lambda));
    }
    lambda = f(std::max(lambda, 0.0));
  }
  return eig.reconstruct();
}

Matrix sqrt_psd(const Matrix& m) {
  // Eigenvalues at the solver's rounding floor are zeros; their square roots
  // would otherwise contribute O(sqrt(eps)) noise.
  const double floor = static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, m.norm());
  return mat_fn(m, [floor](double x) { return x <= floor ? 0.0 : std::sqrt(x); });
}

Matrix inv_sqrt_psd(const Matrix& m) {
  EigDecomposition eig = eig_hermitian(m);
  const double largest = eig.eigenvalues(0);
  const double smallest = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (!(largest > 0.0) || smallest < tol::kPinv * largest) {
    throw Error(ErrorKind::SingularOperator,
                "inverse square root: eigenvalue " + std::to_string(smallest) +
                    " below threshold relative to " + std::to_string(largest));
  }
  eig.eigenvalues = eig.eigenvalues.cwiseSqrt().cwiseInverse();
  return eig.reconstruct();
}

Matrix pinv_sqrt_psd(const Matrix& m) {
  EigDecomposition eig = eig_hermitian(m);
  const double threshold = tol::kPinv * std::max(eig.eigenvalues(0), 0.0);
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    double& lambda = eig.eigenvalues(k);
    lambda = (lambda > threshold && lambda > 0.0) ? 1.0 / std::sqrt(lambda) : 0.0;
  }
  return eig.reconstruct();
}

Matrix support_projector(const Matrix& psd) {
  EigDecomposition eig = eig_hermitian(psd);
  const double threshold = tol::kPinv * std::max(eig.eigenvalues(0), 0.0);
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    double& lambda = eig.eigenvalues(k);
    lambda = (lambda > threshold && lambda > 0.0) ? 1.0 : 0.0;
  }
  return eig.reconstruct();
}

Matrix polar_unitary(const Matrix& a) {
  require_square(a, "polar_unitary");
  // a = U S V^dagger  =>  W = U V^dagger. The full SVD already supplies
  // orthonormal bases for the null spaces, which completes W when a is
  // rank deficient.
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

std::vector<Matrix> real_symmetric_basis(std::size_t dim) {
  std::vector<Matrix> basis;
  basis.reserve(dim * (dim + 1) / 2);
  const auto d = static_cast<Eigen::Index>(dim);
  for (Eigen::Index j = 0; j < d; ++j) {
    Matrix m = Matrix::Zero(d, d);
    m(j, j) = 1.0;
    basis.push_back(std::move(m));
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(j, k) = s;
      m(k, j) = s;
      basis.push_back(std::move(m));
    }
  }
  return basis;
}

std::vector<Matrix> hermitian_basis(std::size_t dim) {
  std::vector<Matrix> basis = real_symmetric_basis(dim);
  const auto d = static_cast<Eigen::Index>(dim);
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(j, k) = Complex(0.0, -s);
      m(k, j) = Complex(0.0, s);
      basis.push_back(std::move(m));
    }
  }
  return basis;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix tensor_power(const Matrix& a, std::size_t n) {
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < n; ++k) out = tensor(out, a);
  return out;
}

Matrix partial_trace_factor(const Matrix& m, std::span<const std::size_t> dims, std::size_t k) {
  require_square(m, "partial_trace");
  if (k >= dims.size() || product(dims) != static_cast<std::size_t>(m.rows())) {
    throw Error(ErrorKind::DimensionMismatch,
                "partial_trace: factor dimensions do not multiply to the matrix size");
  }
  const auto left = static_cast<Eigen::Index>(product(dims.first(k)));
  const auto mid = static_cast<Eigen::Index>(dims[k]);
  const auto right = static_cast<Eigen::Index>(product(dims.subspan(k + 1)));
  Matrix out = Matrix::Zero(left * right, left * right);
  for (Eigen::Index l1 = 0; l1 < left; ++l1) {
    for (Eigen::Index r1 = 0; r1 < right; ++r1) {
      for (Eigen::Index l2 = 0; l2 < left; ++l2) {
        for (Eigen::Index r2 = 0; r2 < right; ++r2) {
          Complex sum = 0.0;
          for (Eigen::Index j = 0; j < mid; ++j) {
            sum += m((l1 * mid + j) * right + r1, (l2 * mid + j) * right + r2);
          }
          out(l1 * right + r1, l2 * right + r2) = sum;
        }
      }
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& m, std::size_t dim_a, std::size_t dim_b, Side traced) {
  const std::size_t dims[] = {dim_a, dim_b};
  return partial_trace_factor(m, dims, traced == Side::A ? 0 : 1);
}

Matrix permute_factors(const Matrix& m, std::span<const std::size_t> dims,
                       std::span<const std::size_t> perm) {
  require_square(m, "permute_factors");
  const std::size_t n = dims.size();
  const std::size_t total = product(dims);
  if (perm.size() != n || total != static_cast<std::size_t>(m.rows())) {
    throw Error(ErrorKind::DimensionMismatch, "permute_factors: shape mismatch");
  }
  std::vector<std::size_t> out_dims(n);
  for (std::size_t j = 0; j < n; ++j) out_dims[j] = dims[perm[j]];

  std::vector<Eigen::Index> map(total);
  std::vector<std::size_t> digits(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t f = n; f-- > 0;) {
      digits[f] = rest % dims[f];
      rest /= dims[f];
    }
    std::size_t out = 0;
    for (std::size_t j = 0; j < n; ++j) out = out * out_dims[j] + digits[perm[j]];
    map[idx] = static_cast<Eigen::Index>(out);
  }
  Matrix result(m.rows(), m.cols());
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      result(map[i], map[j]) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return result;
}

Matrix random_ginibre(std::size_t rows, std::size_t cols, Xoshiro256& rng) {
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // Column-major fill order is part of the reproducible stream.
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = rng.next_normal();
      const double im = rng.next_normal();
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

Vector random_ket(std::size_t dim, Xoshiro256& rng) {
  Vector v = random_ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

Matrix random_density_matrix(std::size_t dim, Xoshiro256& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

Matrix random_unitary(std::size_t dim, Xoshiro256& rng) {
  const Matrix z = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * identity(dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

Matrix random_hermitian(std::size_t dim, Xoshiro256& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

std::vector<Matrix> random_povm_elements(std::size_t dim, std::size_t n, Xoshiro256& rng) {
  std::vector<Matrix> raw;
  raw.reserve(n);
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < n; ++k) {
    const Matrix g = random_ginibre(dim, dim, rng);
    raw.push_back(g * g.adjoint());
    sum += raw.back();
  }
  const Matrix s = inv_sqrt_psd(sum);
  for (auto& e : raw) {
    e = s * e * s;
    e = 0.5 * (e + e.adjoint());
  }
  return raw;
}

}  // namespace qbayes
