#pragma once

// Exchangeable multi-copy states, priors over density operators, Bayesian
// tomography by updating those priors, and the classical and real-field
// counterparts.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qbayes/density_operator.hpp"
#include "qbayes/effects.hpp"

namespace qbayes {

/// D^n may not exceed 2^kMaxLog2Dim.
inline constexpr double kMaxLog2Dim = 10.0;

/// Discrete prior: weights over a common grid of states.
class PriorOverStates {
 public:
  static constexpr double kNormalization = 1e-12;

  PriorOverStates(std::vector<DensityOperator> support, std::vector<double> weights);

  /// Rescales nonnegative weights to sum to one.
  static PriorOverStates normalized(std::vector<DensityOperator> support, std::vector<double> weights);
  static PriorOverStates point(const DensityOperator& state);

  const std::vector<DensityOperator>& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return support_.size(); }
  std::size_t dim() const noexcept { return support_.front().dim(); }

 private:
  std::vector<DensityOperator> support_;
  std::vector<double> weights_;
};

class ExchangeableState {
 public:
  ExchangeableState(std::size_t dim, std::size_t copies, DensityOperator state)
      : dim_(dim), copies_(copies), state_(std::move(state)) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t copies() const noexcept { return copies_; }
  const Matrix& op() const noexcept { return state_.op(); }
  const DensityOperator& state() const noexcept { return state_; }

 private:
  std::size_t dim_;
  std::size_t copies_;
  DensityOperator state_;
};

/// DimensionBudgetExceeded if D^n is over budget.
void check_dimension_budget(std::size_t dim, std::size_t copies);

/// sum_k w_k rho_k^{(x) n}
ExchangeableState definetti_mix(const PriorOverStates& prior, std::size_t copies);

struct ExchangeabilityReport {
  double max_transposition_deviation = 0.0;  // over adjacent transpositions
  double max_marginal_deviation = 0.0;       // over single-factor partial traces; 0 without a parent
};

/// `op` lives on n copies of H_dim. When `reduced` is given it is the
/// (n-1)-copy build that every single-factor partial trace should equal.
ExchangeabilityReport check_exchangeable(const Matrix& op, std::size_t dim, std::size_t copies,
                                         const Matrix* reduced = nullptr);

/// w_k <- w_k prod_t tr(rho_k E_{d_t}), normalized. ZeroLikelihoodEverywhere
/// if the data has probability zero under every weighted grid point.
PriorOverStates posterior_update(const PriorOverStates& prior, const Povm& povm,
                                 std::span<const std::size_t> outcomes);

/// Same update from outcome frequencies.
PriorOverStates posterior_update_counts(const PriorOverStates& prior, const Povm& povm,
                                        std::span<const std::size_t> counts);

/// sum_k w_k rho_k
DensityOperator predictive_state(const PriorOverStates& prior);

/// Qubit states at Bloch vectors on a low-discrepancy grid filling the ball
/// of radius 0.98.
std::vector<DensityOperator> bloch_ball_grid(std::size_t points);

/// Uniform prior and a prior tilted toward the centre and the +x side, both
/// strictly positive on `grid`.
std::pair<PriorOverStates, PriorOverStates> contrasting_priors(const std::vector<DensityOperator>& grid);

struct MergingTrace {
  std::vector<double> inter_agent;  // after each outcome
  std::vector<double> to_truth_a;
  std::vector<double> to_truth_b;
};

/// Both agents update on the same K outcomes drawn from born(truth, povm).
/// The priors must share a support grid.
MergingTrace merging_experiment(const PriorOverStates& prior_a, const PriorOverStates& prior_b,
                                const DensityOperator& truth, const Povm& povm, std::size_t steps,
                                std::uint64_t seed);

struct MergingStudy {
  std::vector<std::size_t> checkpoints;
  std::vector<double> median_inter_agent;  // per checkpoint
  std::vector<double> median_to_truth;     // per checkpoint, worse of the two agents
};

/// Repeated merging runs with contrasting priors on a Bloch-ball grid; the
/// truth is a grid point chosen per run.
MergingStudy merging_study(const Povm& povm, std::span<const std::size_t> checkpoints,
                           std::size_t runs, std::size_t grid_points, std::uint64_t seed);

/// p(x_1 ... x_n) = sum_w P(w) prod_t p_w(x_t), indexed with x_1 most significant.
std::vector<double> classical_definetti_mix(std::span<const std::vector<double>> grid,
                                            std::span<const double> weights, std::size_t copies);

struct NnlsResult {
  RealVector weights;
  double residual = 0.0;  // ||A w - b||_2
  std::size_t iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active-set solver for min ||A w - b|| with w >= 0.
NnlsResult nonnegative_least_squares(const RealMatrix& a, const RealVector& b,
                                     std::size_t max_iterations = 0);

struct RealCounterexampleReport {
  std::size_t copies = 0;
  Matrix state;                        // 1/2 (rho_+^{(x)n} + rho_-^{(x)n}), rho_+- = (I +- Y)/2
  double max_imaginary = 0.0;
  ExchangeabilityReport exchangeability;
  std::size_t real_grid_points = 0;
  double real_fit_residual = 0.0;      // Frobenius, nonnegative weights on real states
  bool real_fit_converged = false;
  double complex_fit_residual = 0.0;   // same grid plus rho_+-
  double witness_inner = 0.0;          // <Y (x) Y (x) I..., state>_HS
  double witness_max_on_grid = 0.0;    // max |<W, rho^{(x)n}>| over real grid states
  double witness_lower_bound = 0.0;    // |<W, state>| / ||W||_F
};

RealCounterexampleReport real_counterexample(std::size_t copies, std::size_t grid_points = 600);

/// Real qubit states (I + x X + z Z)/2 on a sunflower grid of the unit disk.
std::vector<DensityOperator> real_disk_grid(std::size_t points);

}  // namespace qbayes
