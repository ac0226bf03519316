#pragma once

// Dense complex linear algebra at small dimension. Every operator in the
// library (states, effects, Kraus operators, Choi matrices) is a Matrix.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qbayes/rng.hpp"

namespace qbayes {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

namespace tol {
// Rank threshold, relative to the largest eigenvalue, for inverse powers
// and for polar decompositions.
inline constexpr double kPinv = 1e-10;
// Relative Frobenius tolerance on M - M^dagger.
inline constexpr double kHermitian = 1e-10;
// Absolute slack on eigenvalues when testing positivity.
inline constexpr double kPsd = 1e-10;
}  // namespace tol

struct EigDecomposition {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // column k pairs with eigenvalues[k]

  Matrix reconstruct() const;
};

// Which tensor factor partial_trace removes.
enum class Side { A, B };

Matrix identity(std::size_t dim);
Vector basis_ket(std::size_t dim, std::size_t index);
Matrix projector(const Vector& ket);  // |v><v| / <v|v>

namespace pauli {
Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
}  // namespace pauli

double frobenius(const Matrix& m);
Complex hs_inner(const Matrix& a, const Matrix& b);
double trace_distance(const Matrix& a, const Matrix& b);

// ||M - M^dagger||_F / ||M||_F (0 for the zero matrix).
double hermiticity_defect(const Matrix& m);
// ||U^dagger U - I||_F
double unitarity_defect(const Matrix& u);
double min_eigenvalue(const Matrix& hermitian);
double max_eigenvalue(const Matrix& hermitian);

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order. Throws NotHermitian when the relative anti-Hermitian
/// part exceeds tol::kHermitian.
EigDecomposition eig_hermitian(const Matrix& m);

/// V f(Lambda) V^dagger for a Hermitian input, no positivity requirement.
Matrix hermitian_fn(const Matrix& m, const std::function<double(double)>& f);

/// V f(Lambda) V^dagger for a positive semidefinite input. Eigenvalues in
/// [-tol::kPsd, 0) are clamped to zero before f is applied; anything more
/// negative raises NotPsd.
Matrix mat_fn(const Matrix& m, const std::function<double(double)>& f);

Matrix sqrt_psd(const Matrix& m);

/// M^{-1/2}. Raises SingularOperator when an eigenvalue is below
/// tol::kPinv times the largest one.
Matrix inv_sqrt_psd(const Matrix& m);

/// Pseudo-inverse square root: inverts on the support (eigenvalues above
/// tol::kPinv * lambda_max) and is zero elsewhere.
Matrix pinv_sqrt_psd(const Matrix& m);

/// Orthogonal projector onto the eigenvectors with eigenvalue above
/// tol::kPinv * lambda_max.
Matrix support_projector(const Matrix& psd);

/// Unitary factor W of the polar decomposition a = W (a^dagger a)^{1/2}.
/// Rank-deficient inputs get an orthonormal completion on the null space.
Matrix polar_unitary(const Matrix& a);

/// Orthonormal (Hilbert-Schmidt) basis of the D^2-dimensional real space
/// of Hermitian operators: diagonal units first, then the symmetric and
/// antisymmetric off-diagonal pairs for j < k.
std::vector<Matrix> hermitian_basis(std::size_t dim);

/// Orthonormal basis of the D(D+1)/2-dimensional space of real symmetric
/// operators (the diagonal units and symmetric pairs of hermitian_basis).
std::vector<Matrix> real_symmetric_basis(std::size_t dim);

/// Kronecker product; dim(a (x) b) = dim(a) * dim(b).
Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);
Matrix tensor_power(const Matrix& a, std::size_t n);

/// Partial trace of an operator on H_A (x) H_B; `traced` names the factor
/// that is removed.
Matrix partial_trace(const Matrix& m, std::size_t dim_a, std::size_t dim_b, Side traced);

/// Trace out factor `k` of an operator on H_{d0} (x) ... (x) H_{d(n-1)}.
Matrix partial_trace_factor(const Matrix& m, std::span<const std::size_t> dims, std::size_t k);

/// Reorder tensor factors: output factor j is input factor perm[j].
Matrix permute_factors(const Matrix& m, std::span<const std::size_t> dims,
                       std::span<const std::size_t> perm);

// Random test inputs. All draws come from the caller's generator.
Matrix random_ginibre(std::size_t rows, std::size_t cols, Xoshiro256& rng);
Vector random_ket(std::size_t dim, Xoshiro256& rng);
/// Hilbert-Schmidt distributed density matrix (full rank almost surely).
Matrix random_density_matrix(std::size_t dim, Xoshiro256& rng);
/// Haar unitary via QR of a Ginibre matrix with the R-diagonal phases removed.
Matrix random_unitary(std::size_t dim, Xoshiro256& rng);
Matrix random_hermitian(std::size_t dim, Xoshiro256& rng);
/// n PSD operators summing to the identity: Ginibre squares conjugated
/// by the inverse square root of their sum.
std::vector<Matrix> random_povm_elements(std::size_t dim, std::size_t n, Xoshiro256& rng);

}  // namespace qbayes
