#include <cmath>

#include <gtest/gtest.h>

#include "matchers.hpp"
#include "oracles.hpp"
#include "qbayes/effects.hpp"
#include "qbayes/states.hpp"

using namespace qbayes;

TEST(DensityOperator, ValidatesInvariants) {
  EXPECT_THROW_KIND(DensityOperator(identity(2)), NotAState);
  EXPECT_THROW_KIND(DensityOperator(pauli::Z()), NotAState);
  Matrix skew = identity(2) / 2.0;
  skew(0, 1) = 0.3;
  EXPECT_THROW_KIND(DensityOperator{skew}, NotAState);
  EXPECT_NO_THROW(DensityOperator(identity(3) / 3.0));
}

TEST(ToSqm, MaximallyMixedGivesTraces) {
  const auto sqm = canonical_sqm(3);
  const SqmVector v = to_sqm(DensityOperator::maximally_mixed(3));
  for (std::size_t h = 0; h < 9; ++h) {
    EXPECT_NEAR(v.probs()[h], sqm->base[h].op().trace().real() / 3.0, 1e-14);
  }
}

TEST(ToSqm, PureQubitMatchesTraceOracle) {
  const auto sqm = canonical_sqm(2);
  const DensityOperator zero = DensityOperator::pure(basis_ket(2, 0));
  const SqmVector v = to_sqm(zero);
  for (std::size_t h = 0; h < 4; ++h) {
    EXPECT_NEAR(v.probs()[h], oracle::trace_product(zero.op(), sqm->base[h].op()), 1e-14);
  }
}

TEST(ToSqm, DimensionMismatch) {
  EXPECT_THROW_KIND(to_sqm(DensityOperator::maximally_mixed(3), canonical_sqm(2)), DimensionMismatch);
}

TEST(SqmRoundTrip, BothDirections) {
  for (std::size_t d = 2; d <= 4; ++d) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      Xoshiro256 rng = trial_rng(30 + d, t);
      const DensityOperator rho = random_state(d, rng);
      const SqmVector v = to_sqm(rho);
      const DensityOperator back = from_sqm(v);
      EXPECT_TRUE(MatrixNear(back.op(), rho.op(), 1e-9));
      const SqmVector again = to_sqm(back);
      for (std::size_t h = 0; h < v.probs().size(); ++h) EXPECT_NEAR(again.probs()[h], v.probs()[h], 1e-9);
    }
  }
}

TEST(FromSqm, ExteriorVectorsRejected) {
  const auto sqm = canonical_sqm(2);
  std::vector<double> skewed{0.99, 0.01 / 3, 0.01 / 3, 0.01 / 3};
  const SqmVector v(skewed, sqm);
  EXPECT_FALSE(v.within_element_bounds());
  EXPECT_THROW_KIND(from_sqm(v), NotAState);
}

TEST(FromSqm, UniformVectorDecidedByReconstruction) {
  for (std::size_t d = 2; d <= 4; ++d) {
    const auto sqm = canonical_sqm(d);
    const std::vector<double> uniform(d * d, 1.0 / static_cast<double>(d * d));
    const SqmMembership m = in_sqm_set(uniform, *sqm);
    // The preimage always has unit trace; membership is its positivity.
    EXPECT_NEAR(m.reconstructed.trace().real(), 1.0, 1e-12);
    EXPECT_EQ(m.member, m.min_eigenvalue >= -StateCheck::kFloor) << "D=" << d;
  }
}

TEST(SqmVector, SimplexEnforced) {
  const auto sqm = canonical_sqm(2);
  EXPECT_THROW_KIND(SqmVector({0.5, 0.5, 0.5, -0.5}, sqm), InvalidArgument);
  EXPECT_THROW_KIND(SqmVector({0.5, 0.5, 0.5, 0.5}, sqm), InvalidArgument);
  EXPECT_THROW_KIND(SqmVector({0.5, 0.5}, sqm), DimensionMismatch);
}

TEST(InSqmSet, ImagesAreMembersAndVerticesAreNot) {
  for (std::size_t d = 2; d <= 4; ++d) {
    const auto sqm = canonical_sqm(d);
    Xoshiro256 rng(40 + d);
    EXPECT_TRUE(in_sqm_set(to_sqm(random_state(d, rng)).probs(), *sqm).member);
    for (std::size_t h = 0; h < d * d; ++h) {
      std::vector<double> one_hot(d * d, 0.0);
      one_hot[h] = 1.0;
      const SqmMembership m = in_sqm_set(one_hot, *sqm);
      EXPECT_FALSE(m.member) << "D=" << d << " h=" << h;
      EXPECT_LT(m.min_eigenvalue, -StateCheck::kFloor);
    }
  }
}

TEST(InSqmSet, ConvexUnderMixing) {
  const auto sqm = canonical_sqm(3);
  for (std::uint64_t t = 0; t < 100; ++t) {
    Xoshiro256 rng = trial_rng(50, t);
    const auto a = to_sqm(random_state(3, rng)).probs();
    const auto b = to_sqm(random_state(3, rng)).probs();
    const double w = rng.next_double();
    std::vector<double> mix(a.size());
    for (std::size_t h = 0; h < a.size(); ++h) mix[h] = w * a[h] + (1 - w) * b[h];
    EXPECT_TRUE(in_sqm_set(mix, *sqm).member);
  }
}

TEST(InSqmSet, QubitProbabilitiesRespectCertaintyBound) {
  const double bound = certainty_bound(2).value;
  for (std::uint64_t t = 0; t < 200; ++t) {
    Xoshiro256 rng = trial_rng(51, t);
    const auto p = to_sqm(random_pure_state(2, rng)).probs();
    for (double x : p) EXPECT_LE(x, bound + 1e-9);
  }
}

TEST(BayesCondition, IndependentJointKeepsPrior) {
  const std::vector<double> prior{0.2, 0.3, 0.5};
  const std::vector<double> likelihood{0.6, 0.4};
  std::vector<double> joint;
  for (double p : prior)
    for (double l : likelihood) joint.push_back(p * l);
  const JointDistribution j(3, 2, joint);
  const auto post = bayes_condition(j, 1);
  for (std::size_t h = 0; h < 3; ++h) EXPECT_NEAR(post[h], prior[h], 1e-14);
}

TEST(BayesCondition, DeterministicChannelGivesPointMass) {
  const JointDistribution j(3, 3, {0.2, 0, 0, 0, 0.3, 0, 0, 0, 0.5});
  const auto post = bayes_condition(j, 1);
  EXPECT_NEAR(post[1], 1.0, 1e-15);
  EXPECT_NEAR(post[0] + post[2], 0.0, 1e-15);
}

TEST(BayesCondition, MatchesHandNormalizationAndTotalProbability) {
  Xoshiro256 rng(52);
  std::vector<double> joint(12);
  double total = 0.0;
  for (double& x : joint) total += (x = rng.next_double());
  for (double& x : joint) x /= total;
  const JointDistribution j(4, 3, joint);
  const auto data = j.marginal_data();
  std::vector<double> recombined(4, 0.0);
  for (std::size_t d = 0; d < 3; ++d) {
    const double pd = joint[d] + joint[3 + d] + joint[6 + d] + joint[9 + d];
    const auto post = bayes_condition(j, d);
    for (std::size_t h = 0; h < 4; ++h) {
      EXPECT_NEAR(post[h], joint[h * 3 + d] / pd, 1e-14);
      recombined[h] += data[d] * post[h];
    }
  }
  const auto prior = j.marginal_hypotheses();
  for (std::size_t h = 0; h < 4; ++h) EXPECT_NEAR(recombined[h], prior[h], 1e-12);
}

TEST(BayesCondition, ZeroProbabilityData) {
  const JointDistribution j(2, 2, {0.5, 0.0, 0.5, 0.0});
  EXPECT_THROW_KIND(bayes_condition(j, 1), ZeroProbabilityData);
}
