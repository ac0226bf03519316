#include "qbayes/definetti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "qbayes/error.hpp"

namespace qbayes {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Likelihood table p[k][d] = tr(rho_k E_d).
std::vector<std::vector<double>> likelihoods(const PriorOverStates& prior, const Povm& povm) {
  if (prior.dim() != povm.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "prior and POVM dimensions differ");
  }
  std::vector<std::vector<double>> table;
  table.reserve(prior.size());
  for (const auto& state : prior.support()) table.push_back(born(state, povm));
  return table;
}

std::vector<double> log_weights(const PriorOverStates& prior) {
  std::vector<double> out;
  out.reserve(prior.size());
  for (double w : prior.weights()) out.push_back(w > 0.0 ? std::log(w) : kNegInf);
  return out;
}

// exp(l - max) normalized; empty if every entry is -inf.
std::vector<double> normalize_log(const std::vector<double>& logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  if (top == kNegInf) return {};
  std::vector<double> w(logs.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    w[k] = logs[k] == kNegInf ? 0.0 : std::exp(logs[k] - top);
    total += w[k];
  }
  for (double& x : w) x /= total;
  return w;
}

double log_or_neg_inf(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

Matrix mixture(const std::vector<DensityOperator>& support, const std::vector<double>& weights) {
  Matrix out = Matrix::Zero(support.front().op().rows(), support.front().op().cols());
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (weights[k] != 0.0) out += weights[k] * support[k].op();
  }
  return out;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

RealVector vectorize(const Matrix& m) {
  RealVector v(2 * m.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      v(k++) = m(i, j).real();
      v(k++) = m(i, j).imag();
    }
  }
  return v;
}

struct FitResult {
  double residual;
  bool converged;
};

FitResult fit_mixture(const Matrix& target, const std::vector<DensityOperator>& grid,
                      std::size_t copies) {
  const RealVector b = vectorize(target);
  RealMatrix a(b.size(), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    a.col(static_cast<Eigen::Index>(k)) = vectorize(tensor_power(grid[k].op(), copies));
  }
  const NnlsResult fit = nonnegative_least_squares(a, b);
  return {fit.residual, fit.converged};
}

Vector bloch_vector(const DensityOperator& rho) {
  Vector r(3);
  r(0) = hs_inner(rho.op(), pauli::X()).real();
  r(1) = hs_inner(rho.op(), pauli::Y()).real();
  r(2) = hs_inner(rho.op(), pauli::Z()).real();
  return r;
}

DensityOperator qubit(double x, double y, double z) {
  return DensityOperator(0.5 * (pauli::I() + x * pauli::X() + y * pauli::Y() + z * pauli::Z()));
}

}  // namespace

PriorOverStates::PriorOverStates(std::vector<DensityOperator> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty() || support_.size() != weights_.size()) {
    throw Error(ErrorKind::InvalidArgument, "prior needs one weight per support state");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < support_.size(); ++k) {
    if (support_[k].dim() != support_.front().dim()) {
      throw Error(ErrorKind::DimensionMismatch, "support states differ in dimension");
    }
    if (!(weights_[k] >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative prior weight");
    total += weights_[k];
  }
  if (std::abs(total - 1.0) > kNormalization) {
    throw Error(ErrorKind::NotNormalized, "prior weights sum to " + std::to_string(total));
  }
}

PriorOverStates PriorOverStates::normalized(std::vector<DensityOperator> support,
                                            std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidArgument, "prior weights sum to zero");
  for (double& w : weights) w /= total;
  return PriorOverStates(std::move(support), std::move(weights));
}

PriorOverStates PriorOverStates::point(const DensityOperator& state) {
  return PriorOverStates({state}, {1.0});
}

void check_dimension_budget(std::size_t dim, std::size_t copies) {
  if (copies == 0) throw Error(ErrorKind::InvalidArgument, "need at least one copy");
  if (static_cast<double>(copies) * std::log2(static_cast<double>(dim)) > kMaxLog2Dim + 1e-12) {
    throw Error(ErrorKind::DimensionBudgetExceeded,
                std::to_string(dim) + "^" + std::to_string(copies) + " exceeds 2^10");
  }
}

ExchangeableState definetti_mix(const PriorOverStates& prior, std::size_t copies) {
  check_dimension_budget(prior.dim(), copies);
  const auto n = static_cast<Eigen::Index>(std::pow(prior.dim(), copies) + 0.5);
  Matrix op = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < prior.size(); ++k) {
    if (prior.weights()[k] == 0.0) continue;
    op += prior.weights()[k] * tensor_power(prior.support()[k].op(), copies);
  }
  return ExchangeableState(prior.dim(), copies, DensityOperator(std::move(op)));
}

ExchangeabilityReport check_exchangeable(const Matrix& op, std::size_t dim, std::size_t copies,
                                         const Matrix* reduced) {
  const std::vector<std::size_t> dims(copies, dim);
  ExchangeabilityReport r;
  for (std::size_t j = 0; j + 1 < copies; ++j) {
    std::vector<std::size_t> perm(copies);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::swap(perm[j], perm[j + 1]);
    r.max_transposition_deviation =
        std::max(r.max_transposition_deviation, (permute_factors(op, dims, perm) - op).norm());
  }
  if (reduced != nullptr && copies > 1) {
    for (std::size_t k = 0; k < copies; ++k) {
      r.max_marginal_deviation =
          std::max(r.max_marginal_deviation, (partial_trace_factor(op, dims, k) - *reduced).norm());
    }
  }
  return r;
}

PriorOverStates posterior_update(const PriorOverStates& prior, const Povm& povm,
                                 std::span<const std::size_t> outcomes) {
  std::vector<std::size_t> counts(povm.size(), 0);
  for (std::size_t d : outcomes) {
    if (d >= povm.size()) throw Error(ErrorKind::InvalidArgument, "outcome index out of range");
    ++counts[d];
  }
  return posterior_update_counts(prior, povm, counts);
}

PriorOverStates posterior_update_counts(const PriorOverStates& prior, const Povm& povm,
                                        std::span<const std::size_t> counts) {
  if (counts.size() != povm.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one count per POVM outcome required");
  }
  const auto table = likelihoods(prior, povm);
  std::vector<double> logs = log_weights(prior);
  for (std::size_t k = 0; k < prior.size(); ++k) {
    for (std::size_t d = 0; d < counts.size(); ++d) {
      if (counts[d] == 0 || logs[k] == kNegInf) continue;
      logs[k] += static_cast<double>(counts[d]) * log_or_neg_inf(table[k][d]);
    }
  }
  std::vector<double> weights = normalize_log(logs);
  if (weights.empty()) {
    throw Error(ErrorKind::ZeroLikelihoodEverywhere, "data has zero probability under the prior");
  }
  return PriorOverStates(prior.support(), std::move(weights));
}

DensityOperator predictive_state(const PriorOverStates& prior) {
  return DensityOperator(mixture(prior.support(), prior.weights()));
}

std::vector<DensityOperator> bloch_ball_grid(std::size_t points) {
  // Radius from the index (uniform in volume); direction from an R2
  // low-discrepancy sequence mapped to the sphere.
  constexpr double kA1 = 0.7548776662466927;
  constexpr double kA2 = 0.5698402909980532;
  std::vector<DensityOperator> grid;
  grid.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double r = std::cbrt((static_cast<double>(i) + 0.5) / static_cast<double>(points)) * 0.98;
    const double u = std::fmod(0.5 + kA1 * static_cast<double>(i), 1.0);
    const double v = std::fmod(0.5 + kA2 * static_cast<double>(i), 1.0);
    const double z = 1.0 - 2.0 * u;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * std::numbers::pi * v;
    grid.push_back(qubit(r * rho * std::cos(phi), r * rho * std::sin(phi), r * z));
  }
  return grid;
}

std::pair<PriorOverStates, PriorOverStates> contrasting_priors(const std::vector<DensityOperator>& grid) {
  std::vector<double> uniform(grid.size(), 1.0);
  std::vector<double> tilted;
  tilted.reserve(grid.size());
  for (const auto& state : grid) {
    const Vector b = bloch_vector(state);
    tilted.push_back(std::exp(-2.0 * b.squaredNorm() + 1.5 * b(0).real()));
  }
  return {PriorOverStates::normalized(grid, std::move(uniform)),
          PriorOverStates::normalized(grid, std::move(tilted))};
}

MergingTrace merging_experiment(const PriorOverStates& prior_a, const PriorOverStates& prior_b,
                                const DensityOperator& truth, const Povm& povm, std::size_t steps,
                                std::uint64_t seed) {
  if (prior_a.size() != prior_b.size()) {
    throw Error(ErrorKind::InvalidArgument, "priors must share a support grid");
  }
  for (std::size_t k = 0; k < prior_a.size(); ++k) {
    if ((prior_a.support()[k].op() - prior_b.support()[k].op()).norm() > 1e-12) {
      throw Error(ErrorKind::InvalidArgument, "priors must share a support grid");
    }
  }
  const auto table = likelihoods(prior_a, povm);
  const std::vector<double> truth_probs = born(truth, povm);
  std::vector<double> logs_a = log_weights(prior_a);
  std::vector<double> logs_b = log_weights(prior_b);

  Xoshiro256 rng(seed);
  MergingTrace trace;
  for (std::size_t step = 0; step < steps; ++step) {
    double u = rng.next_double();
    std::size_t d = 0;
    while (d + 1 < truth_probs.size() && u >= truth_probs[d]) u -= truth_probs[d++];
    for (std::size_t k = 0; k < table.size(); ++k) {
      const double l = log_or_neg_inf(table[k][d]);
      if (logs_a[k] != kNegInf) logs_a[k] += l;
      if (logs_b[k] != kNegInf) logs_b[k] += l;
    }
    const auto wa = normalize_log(logs_a);
    const auto wb = normalize_log(logs_b);
    if (wa.empty() || wb.empty()) {
      throw Error(ErrorKind::ZeroLikelihoodEverywhere, "data ruled out every grid state");
    }
    const Matrix pa = mixture(prior_a.support(), wa);
    const Matrix pb = mixture(prior_b.support(), wb);
    trace.inter_agent.push_back(trace_distance(pa, pb));
    trace.to_truth_a.push_back(trace_distance(pa, truth.op()));
    trace.to_truth_b.push_back(trace_distance(pb, truth.op()));
  }
  return trace;
}

MergingStudy merging_study(const Povm& povm, std::span<const std::size_t> checkpoints,
                           std::size_t runs, std::size_t grid_points, std::uint64_t seed) {
  if (checkpoints.empty() || runs == 0) {
    throw Error(ErrorKind::InvalidArgument, "merging study needs checkpoints and runs");
  }
  const auto grid = bloch_ball_grid(grid_points);
  const auto [prior_a, prior_b] = contrasting_priors(grid);
  const std::size_t steps = *std::max_element(checkpoints.begin(), checkpoints.end());

  std::vector<std::vector<double>> inter(checkpoints.size());
  std::vector<std::vector<double>> truth(checkpoints.size());
  for (std::size_t r = 0; r < runs; ++r) {
    Xoshiro256 rng = trial_rng(seed, r);
    const DensityOperator& state = grid[rng.next_below(grid.size())];
    const MergingTrace t = merging_experiment(prior_a, prior_b, state, povm, steps, rng());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      const std::size_t at = checkpoints[c] - 1;
      inter[c].push_back(t.inter_agent.at(at));
      truth[c].push_back(std::max(t.to_truth_a.at(at), t.to_truth_b.at(at)));
    }
  }
  MergingStudy study;
  study.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    study.median_inter_agent.push_back(median(inter[c]));
    study.median_to_truth.push_back(median(truth[c]));
  }
  return study;
}

std::vector<double> classical_definetti_mix(std::span<const std::vector<double>> grid,
                                            std::span<const double> weights, std::size_t copies) {
  if (grid.empty() || grid.size() != weights.size()) {
    throw Error(ErrorKind::InvalidArgument, "one weight per grid distribution required");
  }
  const std::size_t k = grid.front().size();
  if (copies == 0) throw Error(ErrorKind::InvalidArgument, "need at least one copy");
  if (static_cast<double>(copies) * std::log2(static_cast<double>(k)) > 2.0 * kMaxLog2Dim + 1e-12) {
    throw Error(ErrorKind::DimensionBudgetExceeded, "outcome table exceeds 2^20 entries");
  }
  std::size_t size = 1;
  for (std::size_t t = 0; t < copies; ++t) size *= k;

  std::vector<double> out(size, 0.0);
  for (std::size_t w = 0; w < grid.size(); ++w) {
    if (grid[w].size() != k) throw Error(ErrorKind::DimensionMismatch, "grid distributions differ in size");
    for (std::size_t index = 0; index < size; ++index) {
      double p = weights[w];
      std::size_t rest = index;
      for (std::size_t t = 0; t < copies; ++t) {
        p *= grid[w][rest % k];
        rest /= k;
      }
      out[index] += p;
    }
  }
  return out;
}

NnlsResult nonnegative_least_squares(const RealMatrix& a, const RealVector& b,
                                     std::size_t max_iterations) {
  const Eigen::Index n = a.cols();
  if (max_iterations == 0) max_iterations = 3 * static_cast<std::size_t>(n) + 30;
  const double tolerance = 1e-12 * std::max(1.0, a.norm()) * std::max(1.0, b.norm());

  NnlsResult result;
  result.weights = RealVector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  RealVector& w = result.weights;

  const auto solve_passive = [&]() {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    RealMatrix sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
    const RealVector zs = sub.colPivHouseholderQr().solve(b);
    RealVector z = RealVector::Zero(n);
    for (std::size_t c = 0; c < cols.size(); ++c) z(cols[c]) = zs(static_cast<Eigen::Index>(c));
    return z;
  };

  while (result.iterations < max_iterations) {
    ++result.iterations;
    const RealVector gradient = a.transpose() * (b - a * w);
    Eigen::Index best = -1;
    double best_value = tolerance;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && gradient(j) > best_value) {
        best_value = gradient(j);
        best = j;
      }
    }
    if (best < 0) {
      result.converged = true;
      break;
    }
    passive[static_cast<std::size_t>(best)] = true;

    for (std::size_t inner = 0; inner <= static_cast<std::size_t>(n); ++inner) {
      const RealVector z = solve_passive();
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, w(j) / (w(j) - z(j)));
        }
      }
      if (feasible) {
        w = z;
        break;
      }
      w += alpha * (z - w);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && w(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          w(j) = 0.0;
        }
      }
    }
  }
  result.residual = (a * w - b).norm();
  return result;
}

std::vector<DensityOperator> real_disk_grid(std::size_t points) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<DensityOperator> grid;
  grid.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double r = std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(points));
    const double theta = golden * static_cast<double>(i);
    grid.push_back(qubit(r * std::cos(theta), 0.0, r * std::sin(theta)));
  }
  return grid;
}

RealCounterexampleReport real_counterexample(std::size_t copies, std::size_t grid_points) {
  if (copies < 2 || copies > 3) throw Error(ErrorKind::InvalidArgument, "copies must be 2 or 3");
  const DensityOperator plus = qubit(0.0, 1.0, 0.0);
  const DensityOperator minus = qubit(0.0, -1.0, 0.0);
  const ExchangeableState mixed =
      definetti_mix(PriorOverStates({plus, minus}, {0.5, 0.5}), copies);

  RealCounterexampleReport r;
  r.copies = copies;
  r.state = mixed.op();
  r.max_imaginary = r.state.imag().cwiseAbs().maxCoeff();
  const ExchangeableState parent =
      definetti_mix(PriorOverStates({plus, minus}, {0.5, 0.5}), copies - 1);
  r.exchangeability = check_exchangeable(r.state, 2, copies, &parent.op());

  std::vector<DensityOperator> grid = real_disk_grid(grid_points);
  r.real_grid_points = grid.size();
  const FitResult real_fit = fit_mixture(r.state, grid, copies);
  r.real_fit_residual = real_fit.residual;
  r.real_fit_converged = real_fit.converged;

  grid.push_back(plus);
  grid.push_back(minus);
  r.complex_fit_residual = fit_mixture(r.state, grid, copies).residual;
  grid.erase(grid.begin() + static_cast<std::ptrdiff_t>(r.real_grid_points), grid.end());

  Matrix witness = tensor(pauli::Y(), pauli::Y());
  for (std::size_t k = 2; k < copies; ++k) witness = tensor(witness, pauli::I());
  r.witness_inner = hs_inner(witness, r.state).real();
  for (const auto& s : grid) {
    r.witness_max_on_grid =
        std::max(r.witness_max_on_grid, std::abs(hs_inner(witness, tensor_power(s.op(), copies)).real()));
  }
  r.witness_lower_bound = std::abs(r.witness_inner) / witness.norm();
  return r;
}

}  // namespace qbayes
