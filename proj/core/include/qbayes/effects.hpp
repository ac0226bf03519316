#pragma once

// POVMs as the basic notion of measurement: validation, the minimal
// informationally complete construction, frame functions and the
// reconstruction of a state from frame-function values.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbayes/density_operator.hpp"
#include "qbayes/linalg.hpp"

namespace qbayes {

/// Hermitian operator with spectrum in [0, 1] (slack 1e-10 either side).
class Effect {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit Effect(Matrix op);

  const Matrix& op() const noexcept { return op_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(op_.rows()); }

 private:
  Matrix op_;
};

/// Ordered effects of one dimension summing to the identity within 1e-9.
/// Only validate_povm builds one.
class Povm {
 public:
  static constexpr double kResolutionTolerance = 1e-9;

  const std::vector<Effect>& elements() const noexcept { return elements_; }
  const Effect& operator[](std::size_t i) const { return elements_.at(i); }
  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t dim() const noexcept { return elements_.front().dim(); }
  std::vector<Matrix> operators() const;

 private:
  explicit Povm(std::vector<Effect> elements) : elements_(std::move(elements)) {}
  friend Povm validate_povm(std::span<const Matrix> candidate);

  std::vector<Effect> elements_;
};

/// Checks each element for positivity (NotPsdError carries the index) and
/// the sum against the identity (NotResolutionError carries the deficit).
Povm validate_povm(std::span<const Matrix> candidate);

Povm random_povm(std::size_t dim, std::size_t outcomes, Xoshiro256& rng);

/// Projective measurement onto the computational basis.
Povm computational_basis_povm(std::size_t dim);

/// The D^2 rank-one projectors of the standard construction, in order:
/// |e_j><e_j| for each j; then (|e_j>+|e_k>)(<e_j|+<e_k|)/2 for j<k;
/// then (|e_j>+i|e_k>)(<e_j|-i<e_k|)/2 for j<k. Pairs run j-major.
std::vector<Matrix> build_ic_projectors(std::size_t dim);

struct MinimalIcPovm {
  Povm base;                       // E_d = G^{-1/2} Pi_d G^{-1/2}
  Matrix gram;                     // G = sum_d Pi_d
  std::vector<Matrix> projectors;  // Pi_d before renormalization

  std::size_t dim() const noexcept { return base.dim(); }
};

/// Renormalize linearly independent PSD operators into a POVM by
/// conjugating with G^{-1/2}. SingularGram when lambda_min(G) falls below
/// tol::kPinv; DegenerateSpan when the inputs are not independent.
MinimalIcPovm gram_renormalize(std::span<const Matrix> projectors);

/// gram_renormalize(build_ic_projectors(dim)).
MinimalIcPovm standard_ic_povm(std::size_t dim);

/// Real Gram matrix tr(A_i A_j) of Hermitian operators.
RealMatrix operator_gram(std::span<const Matrix> ops);

/// Smallest singular value of operator_gram(ops).
double smallest_gram_singular_value(std::span<const Matrix> ops);

/// Dual basis under the Hilbert-Schmidt pairing: tr(dual[i] ops[j]) =
/// delta_ij for D^2 linearly independent Hermitian operators.
/// DegenerateSpan if they are not independent.
std::vector<Matrix> dual_basis(std::span<const Matrix> ops);

/// Generalized Born rule P(d) = tr(rho E_d).
std::vector<double> born(const DensityOperator& state, const Povm& povm);

/// Assignment of probabilities to effects, keyed by value. Effects are
/// canonicalized by rounding every real and imaginary entry to 12 decimal
/// digits, so two effects that agree to 1e-12 share a key.
class FrameFunction {
 public:
  static constexpr double kSumTolerance = 1e-9;

  /// Record f(effect) = value. Re-assigning a key to a different value
  /// (beyond 1e-12) raises InvalidArgument, as does a value outside [0, 1].
  void assign(const Effect& effect, double value);

  /// Record a full POVM; its values must sum to one within 1e-9.
  void record_povm(const Povm& povm, std::span<const double> values);

  std::optional<double> value(const Effect& effect) const;

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<std::pair<Effect, double>>& entries() const noexcept { return entries_; }

  /// f(E) = tr(rho E) on the elements of `povm`.
  static FrameFunction from_state(const DensityOperator& state, const Povm& povm);

 private:
  using Key = std::vector<std::int64_t>;
  static Key key_of(const Matrix& op);

  std::vector<std::pair<Effect, double>> entries_;
  std::map<Key, std::size_t> index_;
};

struct FrameReconstruction {
  Matrix op;               // unique Hermitian solution of tr(op E_i) = f(E_i)
  double residual = 0.0;   // least-squares residual norm
  StateCheck check;        // NotAState is reported here, not thrown
  std::optional<DensityOperator> state;
};

/// Solve tr(rho E_i) = f(E_i) over the Hermitian operators by least
/// squares. DegenerateSpan if the sampled effects do not span the operator
/// space or the residual exceeds 1e-6.
FrameReconstruction reconstruct_from_frame(const FrameFunction& frame);

struct CertaintyBound {
  std::size_t dim = 0;
  double closed_form = 0.0;  // [D - (1 + cot(3 pi / 4D)) / 2]^{-1}
  double numerical = 0.0;    // lambda_max(G^{-1}) for the standard construction
  double value = 0.0;        // closed_form when the two agree, else numerical
  bool agrees = false;       // |closed_form - numerical| <= 1e-9
  std::string warning;
};

CertaintyBound certainty_bound(std::size_t dim);

/// lambda_max(E_h) for each element: the largest probability any state can
/// give that outcome.
std::vector<double> max_probability(const Povm& povm);

/// System POVM induced by coupling to an ancilla in state rho_ancilla with
/// a unitary on system (x) ancilla and measuring orthogonal projectors on the
/// ancilla: E_d = tr_anc((I (x) rho_anc) U^dagger (I (x) Pi_d) U).
Povm povm_from_dilation(const DensityOperator& rho_ancilla, const Matrix& coupling,
                        const Povm& ancilla_projectors);

}  // namespace qbayes
