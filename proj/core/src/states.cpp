#include "qbayes/states.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "qbayes/error.hpp"

namespace qbayes {
namespace {

struct SqmCache {
  std::mutex mutex;
  std::map<std::size_t, std::shared_ptr<const MinimalIcPovm>> by_dim;
};

SqmCache& sqm_cache() {
  static SqmCache cache;
  return cache;
}

void check_simplex(std::span<const double> probs, double tolerance) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw Error(ErrorKind::InvalidArgument, "probabilities sum to " + std::to_string(sum));
  }
}

Matrix preimage(std::span<const double> probs, const MinimalIcPovm& sqm) {
  const auto ops = sqm.base.operators();
  if (probs.size() != ops.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector length differs from the SQM outcome count");
  }
  const auto dual = dual_basis(ops);
  const auto dim = static_cast<Eigen::Index>(sqm.dim());
  Matrix op = Matrix::Zero(dim, dim);
  for (std::size_t h = 0; h < probs.size(); ++h) op += probs[h] * dual[h];
  return 0.5 * (op + op.adjoint());
}

}  // namespace

std::shared_ptr<const MinimalIcPovm> canonical_sqm(std::size_t dim) {
  SqmCache& cache = sqm_cache();
  std::lock_guard lock(cache.mutex);
  auto& slot = cache.by_dim[dim];
  if (!slot) slot = std::make_shared<const MinimalIcPovm>(standard_ic_povm(dim));
  return slot;
}

SqmVector::SqmVector(std::vector<double> probs, std::shared_ptr<const MinimalIcPovm> sqm)
    : probs_(std::move(probs)), sqm_(std::move(sqm)) {
  if (!sqm_) throw Error(ErrorKind::InvalidArgument, "SqmVector needs an SQM");
  if (probs_.size() != sqm_->base.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector length differs from the SQM outcome count");
  }
  check_simplex(probs_, kSumTolerance);
}

bool SqmVector::within_element_bounds() const {
  const auto bounds = max_probability(sqm_->base);
  for (std::size_t h = 0; h < probs_.size(); ++h) {
    if (probs_[h] > bounds[h] + 1e-9) return false;
  }
  return true;
}

SqmVector to_sqm(const DensityOperator& state, std::shared_ptr<const MinimalIcPovm> sqm) {
  if (!sqm) sqm = canonical_sqm(state.dim());
  if (sqm->dim() != state.dim()) throw Error(ErrorKind::DimensionMismatch, "state/SQM dimension");
  auto probs = born(state, sqm->base);
  return SqmVector(std::move(probs), std::move(sqm));
}

DensityOperator from_sqm(const SqmVector& v) {
  return clamp_to_state(preimage(v.probs(), v.sqm()));
}

SqmMembership in_sqm_set(std::span<const double> probs, const MinimalIcPovm& sqm) {
  check_simplex(probs, SqmVector::kSumTolerance);
  SqmMembership out;
  out.reconstructed = preimage(probs, sqm);
  const StateCheck check = check_state(out.reconstructed);
  out.min_eigenvalue = check.min_eigenvalue;
  out.member = check.ok;
  if (out.member) out.state = clamp_to_state(out.reconstructed);
  return out;
}

ClassicalDistribution::ClassicalDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(ErrorKind::InvalidArgument, "empty distribution");
  check_simplex(probs_, kSumTolerance);
}

ClassicalDistribution ClassicalDistribution::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative weight");
    sum += w;
  }
  if (!(sum > 0.0)) throw Error(ErrorKind::InvalidArgument, "weights sum to zero");
  for (double& w : weights) w /= sum;
  return ClassicalDistribution(std::move(weights));
}

JointDistribution::JointDistribution(std::size_t hypotheses, std::size_t data,
                                     std::vector<double> probs)
    : hypotheses_(hypotheses), data_(data), probs_(std::move(probs)) {
  if (probs_.size() != hypotheses_ * data_ || probs_.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "joint table has the wrong size");
  }
  check_simplex(probs_, ClassicalDistribution::kSumTolerance);
}

ClassicalDistribution JointDistribution::marginal_hypotheses() const {
  std::vector<double> p(hypotheses_, 0.0);
  for (std::size_t h = 0; h < hypotheses_; ++h) {
    for (std::size_t d = 0; d < data_; ++d) p[h] += (*this)(h, d);
  }
  return ClassicalDistribution::normalized(std::move(p));
}

ClassicalDistribution JointDistribution::marginal_data() const {
  std::vector<double> p(data_, 0.0);
  for (std::size_t h = 0; h < hypotheses_; ++h) {
    for (std::size_t d = 0; d < data_; ++d) p[d] += (*this)(h, d);
  }
  return ClassicalDistribution::normalized(std::move(p));
}

ClassicalDistribution bayes_condition(const JointDistribution& joint, std::size_t observed) {
  if (observed >= joint.data()) throw Error(ErrorKind::InvalidArgument, "datum index out of range");
  std::vector<double> column(joint.hypotheses());
  double evidence = 0.0;
  for (std::size_t h = 0; h < joint.hypotheses(); ++h) {
    column[h] = joint(h, observed);
    evidence += column[h];
  }
  if (!(evidence > 0.0)) {
    throw Error(ErrorKind::ZeroProbabilityData, "P(d) = 0 for d = " + std::to_string(observed));
  }
  for (double& p : column) p /= evidence;
  return ClassicalDistribution::normalized(std::move(column));
}

}  // namespace qbayes
