#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "matchers.hpp"
#include "oracles.hpp"
#include "qbayes/effects.hpp"
#include "qbayes/linalg.hpp"

using namespace qbayes;

TEST(EigHermitian, IdentityHasUnitEigenvalues) {
  const EigDecomposition e = eig_hermitian(identity(2));
  EXPECT_NEAR(e.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues(1), 1.0, 1e-15);
}

TEST(EigHermitian, PauliZIsDiagonal) {
  const EigDecomposition e = eig_hermitian(pauli::Z());
  EXPECT_NEAR(e.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues(1), -1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.eigenvectors(0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.eigenvectors(1, 1)), 1.0, 1e-15);
}

TEST(EigHermitian, ReconstructsRandomHermitian) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    Xoshiro256 rng = trial_rng(11, t);
    const Matrix h = random_hermitian(2 + t % 5, rng);
    const EigDecomposition e = eig_hermitian(h);
    EXPECT_LE((e.reconstruct() - h).norm(), 1e-10 * h.norm());
    for (Eigen::Index k = 1; k < e.eigenvalues.size(); ++k) {
      EXPECT_GE(e.eigenvalues(k - 1), e.eigenvalues(k));
    }
    const auto reference = oracle::hermitian_spectrum(h);
    for (std::size_t k = 0; k < reference.size(); ++k) {
      EXPECT_NEAR(e.eigenvalues(static_cast<Eigen::Index>(k)), reference[k], 1e-10);
    }
  }
}

TEST(EigHermitian, RejectsNonHermitian) {
  Matrix m = pauli::X();
  m(0, 1) = 2.0;
  EXPECT_THROW_KIND(eig_hermitian(m), NotHermitian);
}

TEST(MatFn, SqrtOfIdentityAndDiagonal) {
  EXPECT_TRUE(MatrixNear(sqrt_psd(identity(3)), identity(3), 1e-14));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 2.0;
  expected(1, 1) = 3.0;
  EXPECT_TRUE(MatrixNear(sqrt_psd(d), expected, 1e-14));
}

TEST(MatFn, InverseSqrtOfStandardGram) {
  const MinimalIcPovm sqm = standard_ic_povm(2);
  const Matrix w = inv_sqrt_psd(sqm.gram);
  EXPECT_TRUE(MatrixNear(w * sqm.gram * w, identity(2), 1e-9));
}

TEST(MatFn, SqrtSquaredAgreesWithIterativeRoot) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    Xoshiro256 rng = trial_rng(5, t);
    const Matrix rho = random_density_matrix(2 + t % 4, rng);
    const Matrix root = sqrt_psd(rho);
    EXPECT_TRUE(MatrixNear(root * root, rho, 1e-9));
    EXPECT_TRUE(MatrixNear(root, oracle::sqrt_pd(rho), 1e-8));
  }
}

TEST(MatFn, SingularInverseThrows) {
  EXPECT_THROW_KIND(inv_sqrt_psd(projector(basis_ket(2, 0))), SingularOperator);
}

TEST(MatFn, NegativeInputThrows) {
  EXPECT_THROW_KIND(sqrt_psd(pauli::Z()), NotPsd);
}

TEST(PolarUnitary, UnitaryIsFixed) {
  Xoshiro256 rng(3);
  const Matrix u = random_unitary(3, rng);
  EXPECT_TRUE(MatrixNear(polar_unitary(u), u, 1e-10));
}

TEST(PolarUnitary, PositiveMatrixGivesIdentity) {
  Xoshiro256 rng(4);
  EXPECT_TRUE(MatrixNear(polar_unitary(random_density_matrix(3, rng)), identity(3), 1e-9));
}

TEST(PolarUnitary, ReconstructsRandomMatrix) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    Xoshiro256 rng = trial_rng(8, t);
    const Matrix a = random_ginibre(3, 3, rng);
    const Matrix w = polar_unitary(a);
    EXPECT_LE(unitarity_defect(w), 1e-9);
    EXPECT_TRUE(MatrixNear(w * oracle::sqrt_pd(a.adjoint() * a), a, 1e-9));
  }
}

TEST(Tensor, IdentityAndBitFlip) {
  EXPECT_TRUE(MatrixNear(tensor(identity(2), identity(2)), identity(4), 0.0));
  const Vector flipped = tensor(pauli::X(), pauli::X()) * basis_ket(4, 0);
  EXPECT_NEAR(std::abs(flipped(3)), 1.0, 1e-15);
}

TEST(Tensor, MatchesKroneckerOracleAndTraceFactorizes) {
  Xoshiro256 rng(9);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_ginibre(2, 2, rng), b = random_ginibre(2, 2, rng);
    const Matrix c = random_ginibre(2, 2, rng), d = random_ginibre(3, 3, rng);
    const Matrix e = random_ginibre(3, 3, rng);
    EXPECT_TRUE(MatrixNear(tensor(a, d), oracle::kron(a, d), 1e-14));
    const Complex lhs = (tensor(a, d) * tensor(c, e)).trace();
    const Complex rhs = (a * c).trace() * (d * e).trace();
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(tensor(a, b).trace() - a.trace() * b.trace()), 0.0, 1e-12);
  }
}

TEST(PartialTrace, ProductState) {
  Xoshiro256 rng(10);
  const Matrix rho = random_density_matrix(2, rng);
  const Matrix sigma = random_density_matrix(3, rng);
  EXPECT_TRUE(MatrixNear(partial_trace(tensor(rho, sigma), 2, 3, Side::A), sigma, 1e-14));
  EXPECT_TRUE(MatrixNear(partial_trace(tensor(rho, sigma), 2, 3, Side::B), rho, 1e-14));
}

TEST(PartialTrace, MaximallyEntangledMarginalIsMixed) {
  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  EXPECT_TRUE(MatrixNear(partial_trace(projector(phi), 2, 2, Side::B), identity(2) / 2.0, 1e-15));
}

TEST(PartialTrace, MatchesIndexOracleAndIsLinear) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    Xoshiro256 rng = trial_rng(12, t);
    const Matrix m = random_ginibre(6, 6, rng);
    const Matrix n = random_ginibre(6, 6, rng);
    EXPECT_TRUE(MatrixNear(partial_trace(m, 2, 3, Side::A), oracle::partial_trace(m, 2, 3, false), 1e-13));
    EXPECT_TRUE(MatrixNear(partial_trace(m, 2, 3, Side::B), oracle::partial_trace(m, 2, 3, true), 1e-13));
    EXPECT_NEAR(std::abs(partial_trace(m, 2, 3, Side::A).trace() - m.trace()), 0.0, 1e-12);
    const Complex alpha(0.3, -1.2);
    EXPECT_TRUE(MatrixNear(partial_trace(m + alpha * n, 2, 3, Side::B),
                           partial_trace(m, 2, 3, Side::B) + alpha * partial_trace(n, 2, 3, Side::B), 1e-12));
  }
}

TEST(PartialTrace, DimensionMismatch) {
  EXPECT_THROW_KIND(partial_trace(identity(5), 2, 3, Side::A), DimensionMismatch);
}

TEST(PartialTrace, FactorAndPermuteAgreeWithBipartite) {
  Xoshiro256 rng(13);
  const Matrix m = random_density_matrix(12, rng);
  const std::vector<std::size_t> dims{2, 3, 2};
  // Tracing the last factor equals the bipartite B-trace with dims (6, 2).
  EXPECT_TRUE(MatrixNear(partial_trace_factor(m, dims, 2), partial_trace(m, 6, 2, Side::B), 1e-13));
  EXPECT_TRUE(MatrixNear(partial_trace_factor(m, dims, 0), partial_trace(m, 2, 6, Side::A), 1e-13));
  const Matrix a = random_density_matrix(2, rng), b = random_density_matrix(3, rng);
  const Matrix c = random_density_matrix(2, rng);
  const std::vector<std::size_t> perm{2, 0, 1};
  EXPECT_TRUE(MatrixNear(permute_factors(tensor(tensor(a, b), c), dims, perm),
                         tensor(tensor(c, a), b), 1e-13));
}

TEST(HsInner, Examples) {
  EXPECT_NEAR(std::abs(hs_inner(identity(2), identity(2)) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(hs_inner(pauli::X(), pauli::Y())), 0.0, 1e-15);
  Xoshiro256 rng(14);
  const Matrix a = random_ginibre(3, 3, rng);
  double entrywise = 0.0;
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) entrywise += std::norm(a(i, j));
  EXPECT_NEAR(hs_inner(a, a).real(), entrywise, 1e-12);
  const Matrix b = random_ginibre(3, 3, rng);
  EXPECT_NEAR(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))), 0.0, 1e-12);
}

TEST(Random, GeneratorsProduceValidObjects) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Xoshiro256 rng(s);
    const Matrix rho = random_density_matrix(2, rng);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue(rho), -1e-12);
    const Matrix u = random_unitary(3, rng);
    EXPECT_LE(unitarity_defect(u), 1e-10);
    const auto elements = random_povm_elements(2, 5, rng);
    Matrix total = Matrix::Zero(2, 2);
    for (const auto& e : elements) total += e;
    EXPECT_TRUE(MatrixNear(total, identity(2), 1e-10));
  }
}

TEST(Random, SameSeedSameStream) {
  Xoshiro256 a(42), b(42);
  EXPECT_TRUE(MatrixNear(random_unitary(4, a), random_unitary(4, b), 0.0));
}

TEST(Bases, HermitianBasisIsOrthonormal) {
  for (std::size_t d = 2; d <= 4; ++d) {
    const auto basis = hermitian_basis(d);
    ASSERT_EQ(basis.size(), d * d);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      EXPECT_LE(hermiticity_defect(basis[i]), 1e-15);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        EXPECT_NEAR(hs_inner(basis[i], basis[j]).real(), i == j ? 1.0 : 0.0, 1e-14);
      }
    }
    EXPECT_EQ(real_symmetric_basis(d).size(), d * (d + 1) / 2);
  }
}
