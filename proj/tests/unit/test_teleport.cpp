#include <cmath>

#include <gtest/gtest.h>

#include "matchers.hpp"
#include "oracles.hpp"
#include "qbayes/teleport.hpp"

using namespace qbayes;

namespace {
constexpr BellOutcome kAll[] = {BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus,
                                BellOutcome::PsiMinus};
}

TEST(Bell, KetsAreOrthonormal) {
  for (BellOutcome a : kAll) {
    for (BellOutcome b : kAll) {
      EXPECT_NEAR(std::abs(bell_ket(a).dot(bell_ket(b))), a == b ? 1.0 : 0.0, 1e-15);
    }
  }
}

TEST(Bell, CorrectionsAreNamedPaulis) {
  EXPECT_TRUE(MatrixNear(bell_correction(BellOutcome::PhiPlus), pauli::I(), 0));
  EXPECT_TRUE(MatrixNear(bell_correction(BellOutcome::PhiMinus), pauli::Z(), 0));
  EXPECT_TRUE(MatrixNear(bell_correction(BellOutcome::PsiPlus), pauli::X(), 0));
  EXPECT_TRUE(MatrixNear(bell_correction(BellOutcome::PsiMinus), pauli::Z() * pauli::X(), 0));
  EXPECT_EQ(correction_name(BellOutcome::PsiMinus), "ZX");
}

TEST(Teleport, BasisStateExample) {
  const TeleportTranscript t = teleport(basis_ket(2, 1), BellOutcome::PsiPlus);
  EXPECT_TRUE(MatrixNear(t.conditional, projector(basis_ket(2, 0)), 1e-14));
  EXPECT_TRUE(MatrixNear(t.receiver_final, projector(basis_ket(2, 1)), 1e-14));
  EXPECT_NEAR(t.fidelity, 1.0, 1e-14);
}

TEST(Teleport, MatchesBranchExpansionForEveryOutcome) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    Xoshiro256 rng = trial_rng(90, i);
    const Vector psi = random_ket(2, rng);
    const auto branches = oracle::teleport_branches(psi);
    for (BellOutcome o : kAll) {
      const TeleportTranscript t = teleport(psi, o);
      const Vector& b = branches[static_cast<std::size_t>(o)];
      EXPECT_TRUE(MatrixNear(t.conditional, projector(b), 1e-12));
      for (double p : t.outcome_probabilities) EXPECT_NEAR(p, 0.25, 1e-12);
      EXPECT_TRUE(MatrixNear(t.receiver_before, identity(2) / 2.0, 1e-12));
      EXPECT_TRUE(MatrixNear(t.receiver_averaged, identity(2) / 2.0, 1e-12));
      EXPECT_NEAR(t.fidelity, 1.0, 1e-9);
      EXPECT_TRUE(MatrixNear(t.receiver_final, projector(psi), 1e-9));
    }
  }
}

TEST(Teleport, SampledOutcomeIsDeterministicPerSeed) {
  Xoshiro256 a(91), b(91);
  const Vector psi = basis_ket(2, 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(teleport(psi, a).outcome, teleport(psi, b).outcome);
}

TEST(Teleport, RejectsUnnormalizedInput) {
  EXPECT_THROW_KIND(teleport(basis_ket(2, 0) * 2.0, BellOutcome::PhiPlus), NotNormalized);
}
