#pragma once

// Quantum states as probability vectors over a fixed standard quantum
// measurement (SQM), membership in the allowed region of such vectors,
// and classical Bayesian conditioning.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qbayes/density_operator.hpp"
#include "qbayes/effects.hpp"

namespace qbayes {

/// The canonical SQM for a dimension: the standard construction over the
/// computational basis. Built once per dimension and shared read-only.
std::shared_ptr<const MinimalIcPovm> canonical_sqm(std::size_t dim);

/// Probability vector over the D^2 outcomes of an SQM. Construction only
/// checks that the vector lies in the simplex; whether it lies in the
/// allowed region is decided by from_sqm / in_sqm_set.
class SqmVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  SqmVector(std::vector<double> probs, std::shared_ptr<const MinimalIcPovm> sqm);

  const std::vector<double>& probs() const noexcept { return probs_; }
  const MinimalIcPovm& sqm() const noexcept { return *sqm_; }
  const std::shared_ptr<const MinimalIcPovm>& sqm_ptr() const noexcept { return sqm_; }

  /// Every entry at most lambda_max of its SQM element (+1e-9).
  bool within_element_bounds() const;

 private:
  std::vector<double> probs_;
  std::shared_ptr<const MinimalIcPovm> sqm_;
};

SqmVector to_sqm(const DensityOperator& state, std::shared_ptr<const MinimalIcPovm> sqm = nullptr);

/// The unique Hermitian rho with tr(rho E_h) = probs[h]; NotAState when it
/// is not a density operator (minimum eigenvalue below -1e-8).
DensityOperator from_sqm(const SqmVector& v);

struct SqmMembership {
  bool member = false;
  Matrix reconstructed;                  // Hermitian preimage of the vector
  double min_eigenvalue = 0.0;           // witness when member is false
  std::optional<DensityOperator> state;  // witness when member is true
};

SqmMembership in_sqm_set(std::span<const double> probs, const MinimalIcPovm& sqm);

/// Nonnegative reals summing to one within 1e-12.
class ClassicalDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit ClassicalDistribution(std::vector<double> probs);
  /// Divide by the sum; the sum must be positive.
  static ClassicalDistribution normalized(std::vector<double> weights);

  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_.at(i); }

 private:
  std::vector<double> probs_;
};

/// Joint distribution P(h, d) stored row-major over (hypothesis, datum).
class JointDistribution {
 public:
  JointDistribution(std::size_t hypotheses, std::size_t data, std::vector<double> probs);

  std::size_t hypotheses() const noexcept { return hypotheses_; }
  std::size_t data() const noexcept { return data_; }
  double operator()(std::size_t h, std::size_t d) const { return probs_.at(h * data_ + d); }

  ClassicalDistribution marginal_hypotheses() const;  // P(h)
  ClassicalDistribution marginal_data() const;        // P(d)

 private:
  std::size_t hypotheses_;
  std::size_t data_;
  std::vector<double> probs_;
};

/// P(h|d) = P(h, d) / P(d). ZeroProbabilityData when P(d) = 0.
ClassicalDistribution bayes_condition(const JointDistribution& joint, std::size_t observed);

}  // namespace qbayes
