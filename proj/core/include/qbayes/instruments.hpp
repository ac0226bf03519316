#pragma once

// Kraus instruments and the state-update rule, including the split of an
// efficient measurement's update into a Bayes-like refinement of the prior
// followed by a unitary readjustment.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qbayes/density_operator.hpp"
#include "qbayes/effects.hpp"

namespace qbayes {

/// Outcomes with probability at or below this get no posterior.
inline constexpr double kProbabilityFloor = 1e-12;

/// Outcome-indexed Kraus operators {A_{d,i}} with sum A^dagger A = I.
class KrausInstrument {
 public:
  static constexpr double kCompletenessTolerance = 1e-9;

  explicit KrausInstrument(std::vector<std::vector<Matrix>> outcomes);

  const std::vector<std::vector<Matrix>>& outcomes() const noexcept { return outcomes_; }
  const std::vector<Matrix>& kraus(std::size_t d) const { return outcomes_.at(d); }
  std::size_t size() const noexcept { return outcomes_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  /// One Kraus operator per outcome.
  bool efficient() const noexcept;

  /// E_d = sum_i A_{d,i}^dagger A_{d,i}.
  Matrix effect(std::size_t d) const;
  Povm povm() const;

 private:
  std::vector<std::vector<Matrix>> outcomes_;
  std::size_t dim_ = 0;
};

struct OutcomeUpdate {
  double probability = 0.0;
  std::optional<DensityOperator> posterior;  // empty when probability <= kProbabilityFloor
};

/// rho_d = sum_i A_{d,i} rho A_{d,i}^dagger / tr(rho E_d).
std::vector<OutcomeUpdate> apply_instrument(const DensityOperator& state,
                                            const KrausInstrument& instrument);

/// A_d = U_d E_d^{1/2}; U_d defaults to the identity. NotUnitary if a
/// supplied readjustment is not unitary to 1e-9.
KrausInstrument efficient_from_povm(const Povm& povm, std::span<const Matrix> unitaries = {});

struct OutcomeFactor {
  double probability = 0.0;
  std::optional<DensityOperator> refinement;  // rho~_d = rho^{1/2} E_d rho^{1/2} / P(d)
  std::optional<DensityOperator> posterior;   // rho_d = A_d rho A_d^dagger / P(d)
  Matrix readjustment;                        // V_d with rho_d = V_d rho~_d V_d^dagger
};

struct UpdateFactorization {
  std::vector<OutcomeFactor> outcomes;

  /// ||rho - sum_d P(d) rho~_d||_F
  double refinement_defect(const DensityOperator& prior) const;
};

/// Factor each outcome of an efficient instrument into refinement and
/// readjustment. V_d is the unitary polar factor of A_d rho^{1/2}: with
/// X = A_d rho^{1/2}, X^dagger X = P(d) rho~_d and X X^dagger = P(d) rho_d,
/// and W = polar(X) satisfies X X^dagger = W X^dagger X W^dagger. This holds
/// for rank-deficient rho as well (rho^{1/2} needs no inverse).
UpdateFactorization factor_update(const DensityOperator& state, const KrausInstrument& instrument);

/// Kraus form of an ancilla-coupled measurement with forward evolution
/// U (rho_S (x) rho_A) U^dagger and ancilla projectors Pi_d. With rho_A =
/// sum_a lambda_a |a><a|, the operators are
///   A_{d,(a,b)} = sqrt(lambda_a) <b| (I (x) Pi_d) U |a>,
/// partial matrix elements on the ancilla, with b running over the ancilla
/// basis. Terms with lambda_a = 0 are dropped.
KrausInstrument instrument_from_dilation(const DensityOperator& rho_ancilla, const Matrix& coupling,
                                         const Povm& ancilla_projectors);

struct Dilation {
  DensityOperator ancilla_state;  // |0><0|
  Matrix coupling;                // unitary on system (x) ancilla
  Povm ancilla_projectors;        // computational basis of the ancilla
};

/// Reverse construction for efficient instruments: ancilla dimension equal
/// to the outcome count, ancilla prepared in |0>, and the isometry
/// |psi> -> sum_d A_d|psi> (x) |d> completed to a unitary.
Dilation dilation_from_instrument(const KrausInstrument& instrument);

/// Posterior of outcome d computed directly from the dilation:
/// tr_anc((I (x) Pi_d) U (rho_S (x) rho_A) U^dagger (I (x) Pi_d)) / P(d).
std::vector<OutcomeUpdate> apply_dilation(const DensityOperator& system, const Dilation& dilation);

struct RefinementTerm {
  double probability = 0.0;
  Matrix refinement;  // rho~_d
};

/// E_d = P(d) rho^{-1/2} rho~_d rho^{-1/2}, validated as a POVM.
/// InconsistentRefinement if sum_d P(d) rho~_d differs from rho by more than
/// 1e-8; RankDeficientState if rho is singular.
Povm identify_measurement(const DensityOperator& state, std::span<const RefinementTerm> refinement);

struct RemoteOutcome {
  double probability = 0.0;
  Matrix conditional;  // tr_A((A_d (x) I)|psi><psi|(A_d^dagger (x) I)) / P(d)
  Matrix refined;      // rho_B^{1/2} F_d rho_B^{1/2} / P(d)
};

struct RemoteMeasurement {
  Matrix marginal_before;          // rho_B
  Matrix marginal_after;           // sum_d P(d) conditional_d
  std::vector<Matrix> pulled_back; // F_d = (U E_d U^dagger)^T in the Schmidt basis of B
  std::vector<RemoteOutcome> outcomes;
};

/// Efficient measurement on side A of a pure state on H_A (x) H_B with
/// dim A = dim B. The B-side update is the refinement by the POVM F_d.
RemoteMeasurement remote_measurement(const Vector& joint, std::size_t dim,
                                     const KrausInstrument& instrument_on_a);

struct SqmTransitionOutcome {
  double probability = 0.0;
  std::vector<double> conditional;  // P(h|d) = tr(rho~_d E_h)
  std::vector<double> posterior;    // P_d(h) = tr(rho_d E_h)
  std::vector<Matrix> readjusted;   // F^d_h = V_d^dagger E_h V_d
  RealMatrix gamma;                 // F^d_h = sum_h' gamma(h, h') E_h'
};

/// The update seen through a standard measurement: Bayes conditioning
/// P(h) -> P(h|d) followed by the linear map gamma on the simplex.
std::vector<SqmTransitionOutcome> sqm_transition(const UpdateFactorization& factorization,
                                                 const MinimalIcPovm& sqm);

}  // namespace qbayes
