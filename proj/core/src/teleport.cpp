#include "qbayes/teleport.hpp"

#include <cmath>

#include "qbayes/error.hpp"

namespace qbayes {
namespace {

constexpr std::array<BellOutcome, 4> kOutcomes{BellOutcome::PhiPlus, BellOutcome::PhiMinus,
                                               BellOutcome::PsiPlus, BellOutcome::PsiMinus};

Vector normalized(const Vector& psi) {
  if (psi.size() != 2) throw Error(ErrorKind::DimensionMismatch, "teleport acts on a qubit");
  const double n = psi.norm();
  if (std::abs(n - 1.0) > 1e-9) throw Error(ErrorKind::NotNormalized, "input ket is not normalized");
  return psi / n;
}

// <B| on the first two qubits of an (input, sender, receiver) vector.
Vector project_pair(const Vector& joint, const Vector& bell) {
  Vector out = Vector::Zero(2);
  for (Eigen::Index pair = 0; pair < 4; ++pair) {
    for (Eigen::Index r = 0; r < 2; ++r) out(r) += std::conj(bell(pair)) * joint(pair * 2 + r);
  }
  return out;
}

TeleportTranscript run(const Vector& psi, const std::function<BellOutcome(const std::array<double, 4>&)>& choose) {
  const Vector input = normalized(psi);
  const Vector joint = tensor(input, bell_ket(BellOutcome::PhiPlus));
  const Matrix joint_op = joint * joint.adjoint();

  TeleportTranscript t;
  t.receiver_before = partial_trace(joint_op, 4, 2, Side::A);

  std::array<Vector, 4> branches;
  t.receiver_averaged = Matrix::Zero(2, 2);
  for (std::size_t k = 0; k < 4; ++k) {
    branches[k] = project_pair(joint, bell_ket(kOutcomes[k]));
    t.outcome_probabilities[k] = branches[k].squaredNorm();
    t.receiver_averaged += branches[k] * branches[k].adjoint();
  }

  t.outcome = choose(t.outcome_probabilities);
  const Vector& branch = branches[static_cast<std::size_t>(t.outcome)];
  t.conditional = projector(branch);
  t.correction = bell_correction(t.outcome);
  t.receiver_final = t.correction * t.conditional * t.correction.adjoint();
  t.fidelity = (input.adjoint() * t.receiver_final * input)(0, 0).real();
  return t;
}

}  // namespace

std::string_view to_string(BellOutcome outcome) {
  switch (outcome) {
    case BellOutcome::PhiPlus: return "Phi+";
    case BellOutcome::PhiMinus: return "Phi-";
    case BellOutcome::PsiPlus: return "Psi+";
    case BellOutcome::PsiMinus: return "Psi-";
  }
  return "?";
}

Vector bell_ket(BellOutcome outcome) {
  const double h = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  switch (outcome) {
    case BellOutcome::PhiPlus: v(0) = h; v(3) = h; break;
    case BellOutcome::PhiMinus: v(0) = h; v(3) = -h; break;
    case BellOutcome::PsiPlus: v(1) = h; v(2) = h; break;
    case BellOutcome::PsiMinus: v(1) = h; v(2) = -h; break;
  }
  return v;
}

Matrix bell_correction(BellOutcome outcome) {
  switch (outcome) {
    case BellOutcome::PhiPlus: return pauli::I();
    case BellOutcome::PhiMinus: return pauli::Z();
    case BellOutcome::PsiPlus: return pauli::X();
    case BellOutcome::PsiMinus: return pauli::Z() * pauli::X();
  }
  return pauli::I();
}

std::string_view correction_name(BellOutcome outcome) {
  switch (outcome) {
    case BellOutcome::PhiPlus: return "I";
    case BellOutcome::PhiMinus: return "Z";
    case BellOutcome::PsiPlus: return "X";
    case BellOutcome::PsiMinus: return "ZX";
  }
  return "?";
}

TeleportTranscript teleport(const Vector& psi, BellOutcome forced) {
  return run(psi, [forced](const std::array<double, 4>&) { return forced; });
}

TeleportTranscript teleport(const Vector& psi, Xoshiro256& rng) {
  return run(psi, [&rng](const std::array<double, 4>& probs) {
    double u = rng.next_double();
    for (std::size_t k = 0; k < 3; ++k) {
      if (u < probs[k]) return kOutcomes[k];
      u -= probs[k];
    }
    return kOutcomes[3];
  });
}

}  // namespace qbayes
