#include "qbayes/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qbayes/effects.hpp"
#include "qbayes/error.hpp"

namespace qbayes {
namespace {

using Real = boost::multiprecision::cpp_bin_float_100;

double log2_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// Confluent divided difference of x^D ln x.
class SubentropyKernel {
 public:
  explicit SubentropyKernel(std::size_t degree) : degree_(degree), harmonic_(degree + 1) {
    harmonic_[0] = 0;
    for (std::size_t k = 1; k <= degree; ++k) harmonic_[k] = harmonic_[k - 1] + Real(1) / k;
  }

  // f^{(m)}(x) / m! = C(D, m) x^{D-m} (ln x + H_D - H_{D-m}); zero at x = 0 for m < D.
  Real scaled_derivative(const Real& x, std::size_t m) const {
    if (x == 0) return Real(0);
    Real binom = 1;
    for (std::size_t k = 0; k < m; ++k) binom = binom * Real(degree_ - k) / Real(k + 1);
    return binom * boost::multiprecision::pow(x, static_cast<int>(degree_ - m)) *
           (boost::multiprecision::log(x) + harmonic_[degree_] - harmonic_[degree_ - m]);
  }

 private:
  std::size_t degree_;
  std::vector<Real> harmonic_;
};

double divided_difference(std::vector<double> nodes) {
  const std::size_t n = nodes.size();
  std::sort(nodes.begin(), nodes.end());
  // Merge near-equal neighbours onto their cluster mean.
  std::vector<Real> z(n);
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && nodes[end] - nodes[end - 1] < kSubentropyCluster) ++end;
    double mean = 0.0;
    for (std::size_t k = start; k < end; ++k) mean += nodes[k];
    mean /= static_cast<double>(end - start);
    for (std::size_t k = start; k < end; ++k) z[k] = Real(std::max(mean, 0.0));
    start = end;
  }

  const SubentropyKernel kernel(n);
  std::vector<Real> column(n);
  for (std::size_t i = 0; i < n; ++i) column[i] = kernel.scaled_derivative(z[i], 0);
  for (std::size_t order = 1; order < n; ++order) {
    for (std::size_t i = 0; i + order < n; ++i) {
      if (z[i + order] == z[i]) {
        column[i] = kernel.scaled_derivative(z[i], order);
      } else {
        column[i] = (column[i + 1] - column[i]) / (z[i + order] - z[i]);
      }
    }
  }
  return static_cast<double>(column[0]);
}

}  // namespace

double shannon(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) h += log2_term(p);
  return h;
}

double shannon(const ClassicalDistribution& p) { return shannon(p.probs()); }

double von_neumann(const DensityOperator& rho) {
  const RealVector spectrum = rho.spectrum();
  double h = 0.0;
  for (Eigen::Index k = 0; k < spectrum.size(); ++k) h += log2_term(std::max(spectrum(k), 0.0));
  return h;
}

double subentropy(std::span<const double> spectrum) {
  if (spectrum.empty()) throw Error(ErrorKind::InvalidArgument, "empty spectrum");
  if (spectrum.size() == 1) return 0.0;
  std::vector<double> nodes(spectrum.begin(), spectrum.end());
  for (double& x : nodes) x = std::max(x, 0.0);
  return std::max(-divided_difference(std::move(nodes)) / std::numbers::ln2, 0.0);
}

double subentropy(const DensityOperator& rho) {
  const RealVector spectrum = rho.spectrum();
  return subentropy(std::span<const double>(spectrum.data(), static_cast<std::size_t>(spectrum.size())));
}

double harmonic_offset(std::size_t dim) {
  double h = 0.0;
  for (std::size_t k = 2; k <= dim; ++k) h += 1.0 / static_cast<double>(k);
  return h / std::numbers::ln2;
}

double mean_entropy(const DensityOperator& rho) { return harmonic_offset(rho.dim()) + subentropy(rho); }

double basis_entropy(const DensityOperator& rho, const Matrix& basis) {
  std::vector<double> probs(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    probs[static_cast<std::size_t>(k)] =
        std::max((basis.col(k).adjoint() * rho.op() * basis.col(k))(0, 0).real(), 0.0);
  }
  return shannon(probs);
}

MonteCarloEstimate mean_entropy_monte_carlo(const DensityOperator& rho, std::size_t samples,
                                            Xoshiro256& rng) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double h = basis_entropy(rho, random_unitary(rho.dim(), rng));
    sum += h;
    sum_sq += h * h;
  }
  const auto n = static_cast<double>(samples);
  const double mean = sum / n;
  const double variance = std::max(sum_sq / n - mean * mean, 0.0) * n / (n - 1.0);
  return {mean, std::sqrt(variance / n), samples};
}

EntropyReport entropy_report(const DensityOperator& rho) {
  EntropyReport r;
  r.shannon = shannon(to_sqm(rho).probs());
  r.von_neumann = von_neumann(rho);
  r.subentropy = subentropy(rho);
  r.mean_entropy = harmonic_offset(rho.dim()) + r.subentropy;
  return r;
}

double classical_refinement_gap(const JointDistribution& joint) {
  const ClassicalDistribution data = joint.marginal_data();
  double expected = 0.0;
  for (std::size_t d = 0; d < joint.data(); ++d) {
    if (data[d] <= 0.0) continue;
    expected += data[d] * shannon(bayes_condition(joint, d));
  }
  return shannon(joint.marginal_hypotheses()) - expected;
}

RefinementGaps refinement_gaps(const DensityOperator& state, const KrausInstrument& instrument) {
  const UpdateFactorization factors = factor_update(state, instrument);
  const auto sqm = canonical_sqm(state.dim());
  const auto sqm_ops = sqm->base.operators();

  RefinementGaps gaps;
  gaps.von_neumann = von_neumann(state);
  gaps.subentropy = subentropy(state);

  // Joint P(h, d) = P(d) tr(rho~_d E_h) over the standard measurement.
  const std::size_t hypotheses = sqm_ops.size();
  const std::size_t data = factors.outcomes.size();
  std::vector<double> joint(hypotheses * data, 0.0);
  for (std::size_t d = 0; d < data; ++d) {
    const auto& f = factors.outcomes[d];
    if (!f.posterior) continue;
    gaps.von_neumann -= f.probability * von_neumann(*f.posterior);
    gaps.subentropy -= f.probability * subentropy(*f.posterior);
    for (std::size_t h = 0; h < hypotheses; ++h) {
      joint[h * data + d] =
          std::max(f.probability * hs_inner(f.refinement->op(), sqm_ops[h]).real(), 0.0);
    }
  }
  double total = 0.0;
  for (double p : joint) total += p;
  for (double& p : joint) p /= total;
  gaps.classical = classical_refinement_gap(JointDistribution(hypotheses, data, std::move(joint)));
  return gaps;
}

RefinementSweep check_refinement_inequalities(std::size_t dim, std::size_t trials,
                                              std::uint64_t seed) {
  RefinementSweep sweep;
  sweep.minimum = {1e300, 1e300, 1e300};
  for (std::size_t t = 0; t < trials; ++t) {
    Xoshiro256 rng = trial_rng(seed, t);
    const DensityOperator state = random_state(dim, rng);
    const std::size_t outcomes = 2 + rng.next_below(dim * dim - 1);
    const Povm povm = random_povm(dim, outcomes, rng);
    std::vector<Matrix> unitaries;
    for (std::size_t d = 0; d < outcomes; ++d) unitaries.push_back(random_unitary(dim, rng));
    const RefinementGaps gaps = refinement_gaps(state, efficient_from_povm(povm, unitaries));
    sweep.minimum.von_neumann = std::min(sweep.minimum.von_neumann, gaps.von_neumann);
    sweep.minimum.subentropy = std::min(sweep.minimum.subentropy, gaps.subentropy);
    sweep.minimum.classical = std::min(sweep.minimum.classical, gaps.classical);
    if (gaps.von_neumann < RefinementSweep::kViolation || gaps.subentropy < RefinementSweep::kViolation ||
        gaps.classical < RefinementSweep::kViolation) {
      ++sweep.violations;
    }
    sweep.trials.push_back(gaps);
  }
  return sweep;
}

}  // namespace qbayes
