#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "matchers.hpp"
#include "oracles.hpp"
#include "qbayes/entropy.hpp"

using namespace qbayes;

namespace {
RealVector diag_spectrum(std::initializer_list<double> v) {
  RealVector r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

DensityOperator diagonal_state(std::initializer_list<double> v) {
  return DensityOperator(diag_spectrum(v).cast<Complex>().asDiagonal());
}
}  // namespace

TEST(Shannon, Examples) {
  EXPECT_NEAR(shannon(std::vector<double>{0.5, 0.5}), 1.0, 1e-15);
  EXPECT_NEAR(shannon(std::vector<double>{1.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(shannon(std::vector<double>{0.25, 0.25, 0.25, 0.25}), 2.0, 1e-15);
}

TEST(VonNeumann, Examples) {
  EXPECT_NEAR(von_neumann(DensityOperator::maximally_mixed(4)), 2.0, 1e-12);
  EXPECT_NEAR(von_neumann(DensityOperator::pure(basis_ket(3, 1))), 0.0, 1e-12);
}

TEST(Subentropy, MaximallyMixedQubit) {
  const double expected = 1.0 - 0.5 / std::numbers::ln2;
  EXPECT_NEAR(subentropy(DensityOperator::maximally_mixed(2)), expected, 1e-12);
  EXPECT_NEAR(subentropy(DensityOperator::maximally_mixed(2)), 0.278652, 1e-6);
}

TEST(Subentropy, PureStateIsZero) {
  EXPECT_NEAR(subentropy(DensityOperator::pure(basis_ket(4, 2))), 0.0, 1e-12);
}

TEST(Subentropy, DistinctSpectraMatchProductFormula) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Xoshiro256 rng = trial_rng(100, t);
    const DensityOperator rho = random_state(2 + t % 4, rng);
    const auto spectrum = oracle::hermitian_spectrum(rho.op());
    EXPECT_NEAR(subentropy(rho), oracle::subentropy_distinct(spectrum), 1e-8);
  }
}

TEST(Subentropy, DegenerateSpectraMatchSplittingLimit) {
  const std::vector<std::vector<double>> cases{
      {0.5, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.4, 0.4, 0.2}, {0.5, 0.5, 0.0}, {0.25, 0.25, 0.25, 0.25},
      {0.3, 0.3, 0.2, 0.2}};
  for (const auto& c : cases) {
    EXPECT_NEAR(subentropy(c), oracle::subentropy_limit(c), 1e-6);
  }
}

TEST(Subentropy, BoundedBySupremumAndVonNeumann) {
  for (std::uint64_t t = 0; t < 500; ++t) {
    Xoshiro256 rng = trial_rng(101, t);
    const DensityOperator rho = random_state(2 + t % 4, rng);
    const double q = subentropy(rho);
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, kSubentropySupremum + 1e-6);
    EXPECT_LE(q, von_neumann(rho) + 1e-9);
  }
}

TEST(Subentropy, MaximallyMixedIncreasesTowardSupremum) {
  double previous = 0.0;
  for (std::size_t d = 2; d <= 10; ++d) {
    const double q = subentropy(DensityOperator::maximally_mixed(d));
    EXPECT_GT(q, previous);
    EXPECT_LT(q, kSubentropySupremum);
    previous = q;
  }
}

TEST(Subentropy, ConcaveAlongMixtures) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Xoshiro256 rng = trial_rng(102, t);
    const DensityOperator a = random_state(3, rng);
    const DensityOperator b = random_state(3, rng);
    const double w = rng.next_double();
    const DensityOperator mix(w * a.op() + (1 - w) * b.op());
    EXPECT_GE(subentropy(mix), w * subentropy(a) + (1 - w) * subentropy(b) - 1e-9);
  }
}

TEST(MeanEntropy, MaximallyMixedQubitIsOneBit) {
  EXPECT_NEAR(mean_entropy(DensityOperator::maximally_mixed(2)), 1.0, 1e-9);
  EXPECT_NEAR(harmonic_offset(2), 0.5 / std::numbers::ln2, 1e-15);
}

TEST(MeanEntropy, EqualsSubentropyPlusOffsetAndIsBoundedBySpectralShannon) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Xoshiro256 rng = trial_rng(103, t);
    const std::size_t d = 2 + t % 3;
    const DensityOperator rho = random_state(d, rng);
    EXPECT_NEAR(mean_entropy(rho), subentropy(rho) + harmonic_offset(d), 1e-12);
    EXPECT_LE(mean_entropy(rho), std::log2(static_cast<double>(d)) + 1e-9);
  }
}

TEST(MeanEntropy, MonteCarloWithinThreeSigma) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    Xoshiro256 rng = trial_rng(104, t);
    const DensityOperator rho = random_state(2 + t % 3, rng);
    const MonteCarloEstimate mc = mean_entropy_monte_carlo(rho, 20000, rng);
    EXPECT_LE(std::abs(mc.mean - mean_entropy(rho)), 3.0 * mc.standard_error + 1e-12);
  }
}

TEST(BasisEntropy, EigenbasisAchievesVonNeumann) {
  Xoshiro256 rng(105);
  const DensityOperator rho = random_state(3, rng);
  const EigDecomposition e = eig_hermitian(rho.op());
  EXPECT_NEAR(basis_entropy(rho, e.eigenvectors), von_neumann(rho), 1e-12);
  for (int k = 0; k < 50; ++k) EXPECT_GE(basis_entropy(rho, random_unitary(3, rng)), von_neumann(rho) - 1e-12);
}

TEST(EntropyReport, FieldsAreConsistent) {
  Xoshiro256 rng(106);
  const DensityOperator rho = random_state(3, rng);
  const EntropyReport r = entropy_report(rho);
  EXPECT_DOUBLE_EQ(r.subentropy, subentropy(rho));
  EXPECT_DOUBLE_EQ(r.von_neumann, von_neumann(rho));
  EXPECT_GE(r.shannon, r.von_neumann);
  EXPECT_GE(r.mean_entropy, r.von_neumann - 1e-12);
}

TEST(ClassicalGap, NonnegativeAndZeroForIndependentData) {
  const JointDistribution independent(2, 2, {0.3 * 0.4, 0.3 * 0.6, 0.7 * 0.4, 0.7 * 0.6});
  EXPECT_NEAR(classical_refinement_gap(independent), 0.0, 1e-12);
  const JointDistribution revealing(2, 2, {0.5, 0.0, 0.0, 0.5});
  EXPECT_NEAR(classical_refinement_gap(revealing), 1.0, 1e-12);
  for (std::uint64_t t = 0; t < 1000; ++t) {
    Xoshiro256 rng = trial_rng(107, t);
    const std::size_t h = 2 + rng.next_below(4), d = 2 + rng.next_below(4);
    std::vector<double> p(h * d);
    double sum = 0.0;
    for (double& x : p) sum += (x = rng.next_double());
    for (double& x : p) x /= sum;
    EXPECT_GE(classical_refinement_gap(JointDistribution(h, d, p)), -1e-12);
  }
}

TEST(RefinementGaps, SweepHasNoViolations) {
  for (std::size_t d : {2u, 3u}) {
    const RefinementSweep s = check_refinement_inequalities(d, 300, 108);
    EXPECT_EQ(s.trials.size(), 300u);
    EXPECT_EQ(s.violations, 0u);
    EXPECT_GE(s.minimum.von_neumann, RefinementSweep::kViolation);
    EXPECT_GE(s.minimum.subentropy, RefinementSweep::kViolation);
    EXPECT_GE(s.minimum.classical, RefinementSweep::kViolation);
  }
}

TEST(RefinementGaps, PureStateHasNothingToLearn) {
  Xoshiro256 rng(109);
  const DensityOperator rho = random_pure_state(3, rng);
  const RefinementGaps g = refinement_gaps(rho, efficient_from_povm(random_povm(3, 4, rng)));
  EXPECT_NEAR(g.von_neumann, 0.0, 1e-9);
  EXPECT_NEAR(g.subentropy, 0.0, 1e-9);
}
