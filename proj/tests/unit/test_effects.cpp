#include <cmath>

#include <gtest/gtest.h>

#include "matchers.hpp"
#include "oracles.hpp"
#include "qbayes/effects.hpp"
#include "qbayes/states.hpp"

using namespace qbayes;

namespace {

Matrix cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

}  // namespace

TEST(ValidatePovm, AcceptsIdentityAndBasis) {
  const std::vector<Matrix> single{identity(2)};
  EXPECT_EQ(validate_povm(single).size(), 1u);
  EXPECT_EQ(computational_basis_povm(2).size(), 2u);
}

TEST(ValidatePovm, RejectsIncompleteSet) {
  const std::vector<Matrix> partial{identity(2) / 2.0, identity(2) / 3.0};
  EXPECT_THROW_KIND(validate_povm(partial), NotResolution);
}

TEST(ValidatePovm, RejectsNegativeElementWithIndex) {
  const std::vector<Matrix> bad{identity(2) + pauli::Z() * 0.0, pauli::Z() * 0.5, -pauli::Z() * 0.5};
  try {
    validate_povm(bad);
    FAIL() << "expected NotPsd";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPsd);
    EXPECT_NE(std::string(e.what()).find("element 1"), std::string::npos) << e.what();
  }
}

TEST(IcProjectors, QubitInstantiation) {
  const auto p = build_ic_projectors(2);
  ASSERT_EQ(p.size(), 4u);
  const Complex i(0.0, 1.0);
  Matrix plus(2, 2), plus_i(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  plus_i << 0.5, -0.5 * i, 0.5 * i, 0.5;
  EXPECT_TRUE(MatrixNear(p[0], projector(basis_ket(2, 0)), 1e-15));
  EXPECT_TRUE(MatrixNear(p[1], projector(basis_ket(2, 1)), 1e-15));
  EXPECT_TRUE(MatrixNear(p[2], plus, 1e-15));
  EXPECT_TRUE(MatrixNear(p[3], plus_i, 1e-15));
}

TEST(IcProjectors, UnitTraceRankOneIndependent) {
  for (std::size_t d = 2; d <= 6; ++d) {
    const auto p = build_ic_projectors(d);
    ASSERT_EQ(p.size(), d * d);
    for (const auto& m : p) {
      EXPECT_NEAR(m.trace().real(), 1.0, 1e-14);
      EXPECT_TRUE(MatrixNear(m * m, m, 1e-14));
    }
    EXPECT_GT(smallest_gram_singular_value(p), 1e-8) << "D=" << d;
  }
}

TEST(IcProjectors, FourDimensionalGramIsNonsingular) {
  const auto p = build_ic_projectors(4);
  RealMatrix gram(16, 16);
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b) gram(a, b) = oracle::trace_product(p[a], p[b]);
  EXPECT_GT(std::abs(gram.determinant()), 1e-12);
}

TEST(GramRenormalize, QubitGramSpectrum) {
  const MinimalIcPovm sqm = standard_ic_povm(2);
  Matrix expected(2, 2);
  expected << 2.0, Complex(0.5, -0.5), Complex(0.5, 0.5), 2.0;
  EXPECT_TRUE(MatrixNear(sqm.gram, expected, 1e-14));
  const auto spectrum = oracle::hermitian_spectrum(sqm.gram);
  EXPECT_NEAR(spectrum[0], 2.0 + 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(spectrum[1], 2.0 - 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(GramRenormalize, ResolvesIdentityWithRankOneElements) {
  for (std::size_t d = 2; d <= 6; ++d) {
    const MinimalIcPovm sqm = standard_ic_povm(d);
    Matrix total = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const auto& e : sqm.base.elements()) {
      total += e.op();
      EXPECT_LT(std::abs(eig_hermitian(e.op()).eigenvalues(1)), 1e-9);
    }
    EXPECT_TRUE(MatrixNear(total, identity(d), 1e-10));
    EXPECT_GT(smallest_gram_singular_value(sqm.base.operators()), 1e-8);
  }
}

TEST(GramRenormalize, DependentInputsRejected) {
  auto p = build_ic_projectors(2);
  p[3] = p[2];
  EXPECT_THROW_KIND(gram_renormalize(p), DegenerateSpan);
}

TEST(Born, Examples) {
  const DensityOperator mixed = DensityOperator::maximally_mixed(2);
  const MinimalIcPovm sqm = standard_ic_povm(2);
  const auto p = born(mixed, sqm.base);
  for (std::size_t d = 0; d < p.size(); ++d) EXPECT_NEAR(p[d], sqm.base[d].op().trace().real() / 2.0, 1e-14);

  const DensityOperator zero = DensityOperator::pure(basis_ket(2, 0));
  const auto q = born(zero, computational_basis_povm(2));
  EXPECT_NEAR(q[0], 1.0, 1e-15);
  EXPECT_NEAR(q[1], 0.0, 1e-15);

  const auto r = born(zero, sqm.base);
  for (std::size_t d = 0; d < r.size(); ++d) EXPECT_NEAR(r[d], oracle::trace_product(zero.op(), sqm.base[d].op()), 1e-14);
}

TEST(Born, DimensionMismatch) {
  EXPECT_THROW_KIND(born(DensityOperator::maximally_mixed(3), computational_basis_povm(2)), DimensionMismatch);
}

TEST(Born, SharedEffectHasOneProbability) {
  Xoshiro256 rng(20);
  const DensityOperator rho = random_state(3, rng);
  const Matrix shared = projector(basis_ket(3, 0));
  const std::vector<Matrix> a{shared, identity(3) - shared};
  const std::vector<Matrix> b{shared, projector(basis_ket(3, 1)), projector(basis_ket(3, 2))};
  EXPECT_NEAR(born(rho, validate_povm(a))[0], born(rho, validate_povm(b))[0], 1e-15);
}

TEST(FrameFunction, AdditiveOnFineGraining) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    Xoshiro256 rng = trial_rng(21, t);
    const DensityOperator rho = random_state(3, rng);
    const auto parts = random_povm_elements(3, 3, rng);
    const auto coarse = std::vector<Matrix>{parts[0] + parts[1], parts[2]};
    const double fine = born(rho, validate_povm(parts))[0] + born(rho, validate_povm(parts))[1];
    EXPECT_NEAR(born(rho, validate_povm(coarse))[0], fine, 1e-12);
  }
}

TEST(FrameFunction, ConflictingAssignmentRejected) {
  FrameFunction f;
  const Effect e(identity(2) / 2.0);
  f.assign(e, 0.5);
  f.assign(Effect(identity(2) / 2.0 + Matrix::Constant(2, 2, 1e-14)), 0.5);
  EXPECT_EQ(f.size(), 1u);
  EXPECT_THROW_KIND(f.assign(e, 0.4), InvalidArgument);
}

TEST(FrameFunction, RecordedPovmMustSumToOne) {
  FrameFunction f;
  const std::vector<double> values{0.3, 0.3};
  EXPECT_THROW_KIND(f.record_povm(computational_basis_povm(2), values), InvalidArgument);
}

TEST(ReconstructFromFrame, PureQubit) {
  const DensityOperator zero = DensityOperator::pure(basis_ket(2, 0));
  const auto rec = reconstruct_from_frame(FrameFunction::from_state(zero, standard_ic_povm(2).base));
  EXPECT_TRUE(MatrixNear(rec.op, zero.op(), 1e-9));
  EXPECT_TRUE(rec.check.ok);
}

TEST(ReconstructFromFrame, MaximallyMixedFromTraces) {
  const MinimalIcPovm sqm = standard_ic_povm(3);
  FrameFunction f;
  std::vector<double> values;
  for (const auto& e : sqm.base.elements()) values.push_back(e.op().trace().real() / 3.0);
  f.record_povm(sqm.base, values);
  EXPECT_TRUE(MatrixNear(reconstruct_from_frame(f).op, identity(3) / 3.0, 1e-9));
}

TEST(ReconstructFromFrame, PredictsHeldOutPovms) {
  const MinimalIcPovm sqm = standard_ic_povm(3);
  for (std::uint64_t t = 0; t < 20; ++t) {
    Xoshiro256 rng = trial_rng(22, t);
    const DensityOperator rho = random_state(3, rng);
    const auto rec = reconstruct_from_frame(FrameFunction::from_state(rho, sqm.base));
    ASSERT_TRUE(rec.state.has_value());
    const Povm test = random_povm(3, 4, rng);
    for (std::size_t d = 0; d < test.size(); ++d) {
      EXPECT_NEAR(oracle::trace_product(rec.op, test[d].op()), oracle::trace_product(rho.op(), test[d].op()), 1e-8);
    }
  }
}

TEST(ReconstructFromFrame, TooFewEffectsIsDegenerate) {
  EXPECT_THROW_KIND(
      reconstruct_from_frame(FrameFunction::from_state(DensityOperator::maximally_mixed(2), computational_basis_povm(2))),
      DegenerateSpan);
}

TEST(ReconstructFromFrame, InconsistentFrameReportsNotAState) {
  const MinimalIcPovm sqm = standard_ic_povm(2);
  FrameFunction f;
  const std::vector<double> one_hot{1.0, 0.0, 0.0, 0.0};
  f.record_povm(sqm.base, one_hot);
  const auto rec = reconstruct_from_frame(f);
  EXPECT_FALSE(rec.check.ok);
  EXPECT_FALSE(rec.state.has_value());
}

TEST(CertaintyBound, QubitValue) {
  const CertaintyBound b = certainty_bound(2);
  EXPECT_NEAR(b.value, 1.0 / (2.0 - std::sqrt(2.0) / 2.0), 1e-12);
  EXPECT_NEAR(b.value, 0.7734590, 1e-7);
}

TEST(CertaintyBound, ClosedFormMatchesEigenvalues) {
  for (std::size_t d = 2; d <= 10; ++d) {
    const CertaintyBound b = certainty_bound(d);
    EXPECT_NEAR(b.closed_form, oracle::certainty_bound(d), 1e-12);
    const Matrix g_inverse = standard_ic_povm(d).gram.inverse();
    EXPECT_NEAR(b.numerical, oracle::hermitian_spectrum(0.5 * (g_inverse + g_inverse.adjoint()))[0], 1e-9);
    EXPECT_TRUE(b.agrees) << b.warning;
    EXPECT_LT(b.value, 1.0);
  }
  EXPECT_NEAR(10.0 * certainty_bound(10).value * 0.79, 1.0, 0.10);
}

TEST(MaxProbability, Examples) {
  const auto proj = max_probability(computational_basis_povm(2));
  EXPECT_NEAR(proj[0], 1.0, 1e-15);
  EXPECT_NEAR(proj[1], 1.0, 1e-15);
  const std::vector<Matrix> halves{identity(2) / 2.0, identity(2) / 2.0};
  const auto h = max_probability(validate_povm(halves));
  EXPECT_NEAR(h[0], 0.5, 1e-15);
  for (double v : max_probability(standard_ic_povm(2).base)) EXPECT_LE(v, 0.7734590 + 1e-7);
}

TEST(PovmFromDilation, NoInteractionGivesScaledIdentity) {
  Xoshiro256 rng(23);
  const DensityOperator ancilla = random_state(2, rng);
  const Povm e = povm_from_dilation(ancilla, identity(4), computational_basis_povm(2));
  for (std::size_t d = 0; d < 2; ++d) {
    EXPECT_TRUE(MatrixNear(e[d].op(), ancilla.op()(d, d).real() * identity(2), 1e-12));
  }
}

TEST(PovmFromDilation, CnotReadsTheComputationalBasis) {
  const DensityOperator ancilla = DensityOperator::pure(basis_ket(2, 0));
  const Povm e = povm_from_dilation(ancilla, cnot(), computational_basis_povm(2));
  EXPECT_TRUE(MatrixNear(e[0].op(), projector(basis_ket(2, 0)), 1e-12));
  EXPECT_TRUE(MatrixNear(e[1].op(), projector(basis_ket(2, 1)), 1e-12));
}

TEST(PovmFromDilation, MatchesDilatedProbabilities) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    Xoshiro256 rng = trial_rng(24, t);
    const DensityOperator ancilla = random_state(3, rng);
    const Matrix u = random_unitary(6, rng);
    const Povm e = povm_from_dilation(ancilla, u, computational_basis_povm(3));
    const DensityOperator system = random_state(2, rng);
    const auto p = born(system, e);
    for (std::size_t d = 0; d < 3; ++d) {
      const Matrix branch = oracle::dilation_branch(system.op(), ancilla.op(), u, projector(basis_ket(3, d)));
      EXPECT_NEAR(p[d], branch.trace().real(), 1e-9);
    }
  }
}

TEST(PovmFromDilation, RejectsBadShapes) {
  const DensityOperator ancilla = DensityOperator::maximally_mixed(2);
  EXPECT_THROW_KIND(povm_from_dilation(ancilla, identity(5), computational_basis_povm(2)), DimensionMismatch);
}
