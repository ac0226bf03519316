#include "qbayes/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "qbayes/channels.hpp"
#include "qbayes/definetti.hpp"
#include "qbayes/effects.hpp"
#include "qbayes/entropy.hpp"
#include "qbayes/error.hpp"
#include "qbayes/instruments.hpp"
#include "qbayes/locality.hpp"
#include "qbayes/states.hpp"
#include "qbayes/teleport.hpp"

namespace qbayes::cli {
namespace {

// Accumulates check records. Thresholds are looked up by name so any of them
// can be overridden with --tol NAME=VALUE.
class Suite {
 public:
  Suite(const RunConfig& config, std::string prefix) : config_(config), prefix_(std::move(prefix)) {}

  double tol(const std::string& name, double fallback) const {
    const auto it = config_.tolerances.find(name);
    return it == config_.tolerances.end() ? fallback : it->second;
  }

  void le(const std::string& name, double value, double threshold) { add(name, value, threshold, "<="); }
  void lt(const std::string& name, double value, double threshold) { add(name, value, threshold, "<"); }
  void ge(const std::string& name, double value, double threshold) { add(name, value, threshold, ">="); }
  void gt(const std::string& name, double value, double threshold) { add(name, value, threshold, ">"); }

  const RunConfig& config() const noexcept { return config_; }
  std::vector<CheckRecord>& records() noexcept { return records_; }

 private:
  void add(const std::string& name, double value, double fallback, const std::string& op) {
    const double threshold = tol(name, fallback);
    bool pass = false;
    if (op == "<=") pass = value <= threshold;
    if (op == "<") pass = value < threshold;
    if (op == ">=") pass = value >= threshold;
    if (op == ">") pass = value > threshold;
    records_.push_back({prefix_ + name, value, threshold, op, pass && std::isfinite(value)});
  }

  const RunConfig& config_;
  std::string prefix_;
  std::vector<CheckRecord> records_;
};

double max_abs_diff(const RealVector& a, const RealVector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

void sqm_build(Suite& s) {
  const std::size_t dim = s.config().dim;
  const MinimalIcPovm sqm = standard_ic_povm(dim);
  const auto ops = sqm.base.operators();
  Matrix total = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  double rank_defect = 0.0;
  for (const auto& e : ops) {
    total += e;
    const RealVector spectrum = eig_hermitian(e).eigenvalues;
    rank_defect = std::max(rank_defect, std::abs(spectrum(1)));
  }
  s.ge("element_count", static_cast<double>(ops.size()), static_cast<double>(dim * dim));
  s.le("resolution_defect", (total - identity(dim)).norm(), 1e-9);
  s.le("rank_one_defect", rank_defect, 1e-9);
  s.gt("gram_min_singular_value", smallest_gram_singular_value(ops), 1e-8);
}

void gleason_roundtrip(Suite& s) {
  const std::size_t dim = s.config().dim;
  const auto sqm = canonical_sqm(dim);
  double worst_state = 0.0;
  double worst_prediction = 0.0;
  for (std::size_t t = 0; t < s.config().trials; ++t) {
    Xoshiro256 rng = trial_rng(s.config().seed, t);
    const DensityOperator state = random_state(dim, rng);
    const FrameReconstruction rec = reconstruct_from_frame(FrameFunction::from_state(state, sqm->base));
    worst_state = std::max(worst_state, trace_distance(rec.op, state.op()));
    for (int k = 0; k < 5; ++k) {
      const Povm test = random_povm(dim, 3, rng);
      const auto truth = born(state, test);
      for (std::size_t d = 0; d < test.size(); ++d) {
        worst_prediction = std::max(worst_prediction,
                                    std::abs(hs_inner(rec.op, test[d].op()).real() - truth[d]));
      }
    }
  }
  s.le("state_trace_distance", worst_state, 1e-8);
  s.le("heldout_prediction_error", worst_prediction, 1e-8);
}

void certainty(Suite& s) {
  const std::size_t dim = s.config().dim;
  const CertaintyBound bound = certainty_bound(dim);
  s.le("closed_vs_numerical", std::abs(bound.closed_form - bound.numerical), 1e-9);
  s.gt("bound", bound.value, 0.0);
  const auto sqm = canonical_sqm(dim);
  double worst = 0.0;
  for (std::size_t t = 0; t < s.config().trials; ++t) {
    Xoshiro256 rng = trial_rng(s.config().seed, t);
    const auto probs = born(random_state(dim, rng), sqm->base);
    worst = std::max(worst, *std::max_element(probs.begin(), probs.end()));
  }
  s.le("max_sqm_probability", worst, bound.value + 1e-12);
  const CertaintyBound ten = certainty_bound(10);
  s.le("d10_scaled_vs_0.79", std::abs(10.0 * ten.value * 0.79 - 1.0), 0.10);
}

void teleport_check(Suite& s) {
  Xoshiro256 rng(s.config().seed);
  const Vector psi = random_ket(2, rng);
  const TeleportTranscript sampled = teleport(psi, rng);
  s.le("sampled_fidelity_defect", std::abs(1.0 - sampled.fidelity), 1e-9);
  double fidelity = 0.0;
  double marginal = 0.0;
  double probability = 0.0;
  const Matrix half = identity(2) / 2.0;
  for (int k = 0; k < 4; ++k) {
    const TeleportTranscript t = teleport(psi, static_cast<BellOutcome>(k));
    fidelity = std::max(fidelity, std::abs(1.0 - t.fidelity));
    marginal = std::max({marginal, (t.receiver_before - half).norm(), (t.receiver_averaged - half).norm()});
    for (double p : t.outcome_probabilities) probability = std::max(probability, std::abs(p - 0.25));
  }
  s.le("forced_fidelity_defect", fidelity, 1e-9);
  s.le("receiver_marginal_defect", marginal, 1e-12);
  s.le("outcome_probability_defect", probability, 1e-12);
}

void update_factor(Suite& s) {
  const std::size_t dim = s.config().dim;
  double refinement = 0.0;
  double spectra = 0.0;
  double readjust = 0.0;
  double pure = 0.0;
  double identified = 0.0;
  for (std::size_t t = 0; t < s.config().trials; ++t) {
    Xoshiro256 rng = trial_rng(s.config().seed, t);
    const DensityOperator state = random_state(dim, rng);
    const Povm povm = random_povm(dim, 2 + rng.next_below(3), rng);
    std::vector<Matrix> unitaries;
    for (std::size_t d = 0; d < povm.size(); ++d) unitaries.push_back(random_unitary(dim, rng));
    const KrausInstrument inst = efficient_from_povm(povm, unitaries);
    const UpdateFactorization f = factor_update(state, inst);
    refinement = std::max(refinement, f.refinement_defect(state));
    std::vector<RefinementTerm> terms;
    for (const auto& o : f.outcomes) {
      if (!o.posterior) continue;
      spectra = std::max(spectra, max_abs_diff(o.posterior->spectrum(), o.refinement->spectrum()));
      readjust = std::max(readjust, (o.readjustment * o.refinement->op() * o.readjustment.adjoint() -
                                     o.posterior->op()).norm());
      terms.push_back({o.probability, o.refinement->op()});
    }
    if (terms.size() == povm.size()) {
      const Povm back = identify_measurement(state, terms);
      for (std::size_t d = 0; d < povm.size(); ++d) {
        identified = std::max(identified, (back[d].op() - povm[d].op()).norm());
      }
    }
    const DensityOperator pure_state = random_pure_state(dim, rng);
    for (const auto& o : factor_update(pure_state, inst).outcomes) {
      if (o.refinement) pure = std::max(pure, (o.refinement->op() - pure_state.op()).norm());
    }
  }
  s.le("refinement_identity", refinement, 1e-9);
  s.le("spectrum_equality", spectra, 1e-8);
  s.le("readjustment_defect", readjust, 1e-8);
  s.le("pure_state_no_refinement", pure, 1e-10);
  s.le("identify_measurement_roundtrip", identified, 1e-8);
}

void entropy_sweep(Suite& s) {
  const std::size_t dim = s.config().dim;
  const DensityOperator half = DensityOperator::maximally_mixed(2);
  s.le("subentropy_half_identity", std::abs(subentropy(half) - 0.278652), 1e-6);
  s.le("mean_entropy_half_identity", std::abs(mean_entropy(half) - 1.0), 1e-9);
  double max_q = 0.0;
  for (std::size_t t = 0; t < s.config().trials; ++t) {
    Xoshiro256 rng = trial_rng(s.config().seed, t);
    max_q = std::max(max_q, subentropy(random_state(dim, rng)));
  }
  s.le("max_subentropy", max_q, 0.60995 + 1e-6);

  Xoshiro256 rng(s.config().seed);
  const DensityOperator state = random_state(dim, rng);
  const MonteCarloEstimate mc = mean_entropy_monte_carlo(state, 20000, rng);
  s.le("mean_entropy_mc_sigmas", std::abs(mc.mean - mean_entropy(state)) / mc.standard_error, 3.0);

  const RefinementSweep sweep = check_refinement_inequalities(dim, s.config().trials, s.config().seed);
  s.ge("min_von_neumann_gap", sweep.minimum.von_neumann, -1e-8);
  s.ge("min_subentropy_gap", sweep.minimum.subentropy, -1e-8);
  s.ge("min_classical_gap", sweep.minimum.classical, -1e-8);
}

void locality_reconstruct(Suite& s) {
  const std::size_t dim = s.config().dim;
  double roundtrip = 0.0;
  double residual = 0.0;
  for (std::size_t t = 0; t < s.config().trials; ++t) {
    Xoshiro256 rng = trial_rng(s.config().seed, t);
    const Matrix joint = random_density_matrix(2 * dim, rng);
    const BilinearFrame frame = BilinearFrame::from_operator(joint, 2, dim);
    const Matrix rebuilt = reconstruct_joint_operator(frame);
    roundtrip = std::max(roundtrip, (rebuilt - joint).norm());
    residual = std::max(residual, frame_residual(frame, rebuilt, 5, rng));
  }
  s.le("joint_roundtrip", roundtrip, 1e-8);
  s.le("heldout_frame_residual", residual, 1e-8);

  const DimensionCount count = real_dimension_count(2, dim);
  s.le("real_product_rank_defect",
       std::abs(static_cast<double>(count.product_span_rank) - static_cast<double>(count.product_span)), 0.0);
  s.le("real_symmetric_rank_defect",
       std::abs(static_cast<double>(count.full_symmetric_rank) - static_cast<double>(count.full_symmetric)), 0.0);
  s.le("complex_rank_defect",
       std::abs(static_cast<double>(count.complex_product_rank) - static_cast<double>(4 * dim * dim)), 0.0);

  const Povm domino = domino_fixture();
  Matrix total = Matrix::Zero(9, 9);
  for (const auto& e : domino.elements()) total += e.op();
  s.le("domino_resolution", (total - identity(9)).norm(), 1e-10);
}

void swap_check(Suite& s) {
  const SwapReport r = swap_counterexample(s.config().dim, 100, s.config().trials, s.config().seed);
  s.le("tree_normalization", r.max_tree_defect, 1e-9);
  s.ge("min_frame_value", r.min_frame_value, 0.0);
  s.lt("min_eigenvalue", r.min_eigenvalue, -1e-3);
  s.le("trivial_tree_constant_vs_dim", std::abs(r.constant - static_cast<double>(r.dim)), 1e-12);
}

void definetti_merge(Suite& s) {
  const auto sqm = canonical_sqm(2);
  const std::vector<std::size_t> checkpoints{10, 50, 100, 500};
  const MergingStudy ic = merging_study(sqm->base, checkpoints, 20, 200, s.config().seed);
  s.lt("ic_median_inter_agent_k500", ic.median_inter_agent.back(), 0.05);
  s.lt("ic_median_to_truth_k500", ic.median_to_truth.back(), 0.05);
  double increase = 0.0;
  for (std::size_t c = 1; c < checkpoints.size(); ++c) {
    increase = std::max(increase, ic.median_inter_agent[c] - ic.median_inter_agent[c - 1]);
  }
  s.le("ic_median_monotone_increase", increase, 0.0);
  const MergingStudy z = merging_study(computational_basis_povm(2), checkpoints, 20, 200, s.config().seed);
  s.gt("non_ic_median_inter_agent_k500", z.median_inter_agent.back(), 0.05);
}

void real_check(Suite& s) {
  for (std::size_t n : {2, 3}) {
    const RealCounterexampleReport r = real_counterexample(n);
    const std::string tag = "n" + std::to_string(n) + ".";
    s.le(tag + "max_imaginary", r.max_imaginary, 1e-12);
    s.le(tag + "transposition_deviation", r.exchangeability.max_transposition_deviation, 1e-9);
    s.le(tag + "marginal_deviation", r.exchangeability.max_marginal_deviation, 1e-9);
    s.le(tag + "witness_on_real_grid", r.witness_max_on_grid, 1e-12);
    s.gt(tag + "witness_lower_bound", r.witness_lower_bound, 0.0);
    s.ge(tag + "real_fit_residual_minus_bound", r.real_fit_residual - r.witness_lower_bound, -1e-9);
    s.lt(tag + "complex_fit_residual", r.complex_fit_residual, 1e-9);
  }
}

using Command = std::function<void(Suite&)>;

const std::map<std::string_view, Command>& commands() {
  static const std::map<std::string_view, Command> table{
      {"sqm-build", sqm_build},
      {"gleason-roundtrip", gleason_roundtrip},
      {"certainty-bound", certainty},
      {"teleport", teleport_check},
      {"update-factor", update_factor},
      {"entropy-sweep", entropy_sweep},
      {"locality-reconstruct", locality_reconstruct},
      {"swap-counterexample", swap_check},
      {"definetti-merge", definetti_merge},
      {"real-counterexample", real_check},
  };
  return table;
}

}  // namespace

const std::vector<std::string_view>& command_names() {
  static const std::vector<std::string_view> names{
      "sqm-build",           "gleason-roundtrip",   "certainty-bound",
      "teleport",            "update-factor",       "entropy-sweep",
      "locality-reconstruct", "swap-counterexample", "definetti-merge",
      "real-counterexample"};
  return names;
}

Report run_command(const RunConfig& config) {
  Report report;
  report.command = config.command;
  report.config = config;
  if (config.command == "all") {
    for (std::string_view name : command_names()) {
      Suite suite(config, std::string(name) + ".");
      commands().at(name)(suite);
      for (auto& r : suite.records()) report.checks.push_back(std::move(r));
    }
  } else {
    const auto it = commands().find(config.command);
    if (it == commands().end()) {
      throw Error(ErrorKind::InvalidArgument, "unknown command " + config.command);
    }
    Suite suite(config, "");
    it->second(suite);
    report.checks = std::move(suite.records());
  }
  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const CheckRecord& c) { return c.pass; });
  return report;
}

}  // namespace qbayes::cli
