#pragma once

// Shannon, von Neumann, subentropy and mean measurement entropy, in bits,
// and the expected-uncertainty gaps left by a measurement.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qbayes/density_operator.hpp"
#include "qbayes/instruments.hpp"
#include "qbayes/states.hpp"

namespace qbayes {

/// Upper bound of the subentropy over all dimensions, (1 - gamma) / ln 2.
inline constexpr double kSubentropySupremum = 0.6099502;

double shannon(std::span<const double> probs);
double shannon(const ClassicalDistribution& p);
double von_neumann(const DensityOperator& rho);

/// -f[l_1, ..., l_D] / ln 2 for f(x) = x^D ln x, the divided difference over
/// the spectrum. Eigenvalues within kSubentropyCluster of each other are
/// merged into a confluent node, so degenerate spectra give the limit value.
double subentropy(const DensityOperator& rho);
double subentropy(std::span<const double> spectrum);
inline constexpr double kSubentropyCluster = 1e-9;

/// (1/2 + 1/3 + ... + 1/D) / ln 2
double harmonic_offset(std::size_t dim);

/// Average Shannon entropy of a Haar-random orthonormal-basis measurement.
double mean_entropy(const DensityOperator& rho);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

MonteCarloEstimate mean_entropy_monte_carlo(const DensityOperator& rho, std::size_t samples,
                                            Xoshiro256& rng);

/// Shannon entropy of an orthonormal-basis measurement (columns of `basis`).
double basis_entropy(const DensityOperator& rho, const Matrix& basis);

struct EntropyReport {
  double shannon = 0.0;  // of the canonical standard-measurement distribution
  double von_neumann = 0.0;
  double subentropy = 0.0;
  double mean_entropy = 0.0;
};

EntropyReport entropy_report(const DensityOperator& rho);

/// H(h) - sum_d P(d) H(h|d)
double classical_refinement_gap(const JointDistribution& joint);

struct RefinementGaps {
  double von_neumann = 0.0;  // S(rho) - sum_d P(d) S(rho_d)
  double subentropy = 0.0;   // Q(rho) - sum_d P(d) Q(rho_d)
  double classical = 0.0;    // over the canonical standard measurement
};

/// Gaps for one efficient instrument applied to one state.
RefinementGaps refinement_gaps(const DensityOperator& state, const KrausInstrument& instrument);

struct RefinementSweep {
  static constexpr double kViolation = -1e-8;

  std::vector<RefinementGaps> trials;
  RefinementGaps minimum;
  std::size_t violations = 0;
};

/// Random full-rank states and random efficient instruments at `dim`.
RefinementSweep check_refinement_inequalities(std::size_t dim, std::size_t trials,
                                              std::uint64_t seed);

}  // namespace qbayes
