#pragma once

// Qubit teleportation through a shared Phi+ pair, tracked as the sequence of
// state assignments made by the sender and the receiver.

#include <array>
#include <string_view>

#include "qbayes/linalg.hpp"
#include "qbayes/rng.hpp"

namespace qbayes {

enum class BellOutcome { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

std::string_view to_string(BellOutcome outcome);

/// Bell vector for an outcome, on (first qubit) (x) (second qubit).
Vector bell_ket(BellOutcome outcome);

/// Pauli applied by the receiver: Phi+ -> I, Phi- -> Z, Psi+ -> X, Psi- -> Z X.
Matrix bell_correction(BellOutcome outcome);
std::string_view correction_name(BellOutcome outcome);

struct TeleportTranscript {
  std::array<double, 4> outcome_probabilities{};
  BellOutcome outcome = BellOutcome::PhiPlus;
  Matrix receiver_before;     // receiver's marginal before the Bell measurement
  Matrix receiver_averaged;   // receiver's marginal after it, outcome unknown
  Matrix conditional;         // sender's description of the receiver given the outcome
  Matrix correction;
  Matrix receiver_final;      // after the correction
  double fidelity = 0.0;      // <psi| receiver_final |psi>, the YES probability
};

/// Teleport `psi` with the Bell outcome forced.
TeleportTranscript teleport(const Vector& psi, BellOutcome forced);

/// Teleport `psi` with the Bell outcome sampled from its probabilities.
TeleportTranscript teleport(const Vector& psi, Xoshiro256& rng);

}  // namespace qbayes
