#pragma once

// Locally measurable POVM trees on a bipartite system, frame functions on
// pairs of local effects, and reconstruction of the joint operator those
// functions determine.

#include <cstddef>
#include <functional>
#include <vector>

#include "qbayes/effects.hpp"
#include "qbayes/linalg.hpp"
#include "qbayes/rng.hpp"

namespace qbayes {

/// A first measurement on one factor followed by a measurement on the other
/// factor chosen according to its outcome.
struct PovmTree {
  enum class Direction { AtoB, BtoA };

  Direction direction = Direction::AtoB;
  Povm first;
  std::vector<Povm> branches;  // branches[i] follows first outcome i

  std::size_t dim_a() const;
  std::size_t dim_b() const;
};

/// Validates dimensions and that there is one branch per first outcome.
PovmTree make_tree(PovmTree::Direction direction, Povm first, std::vector<Povm> branches);

/// First measurement and each branch drawn from random_povm with 2 to 5
/// outcomes.
PovmTree random_tree(std::size_t dim_a, std::size_t dim_b, PovmTree::Direction direction,
                     Xoshiro256& rng);

/// The trivial tree {I} followed by {I}.
PovmTree trivial_tree(std::size_t dim_a, std::size_t dim_b);

/// f(E, F) for an effect E on A and F on B.
class BilinearFrame {
 public:
  using Evaluator = std::function<double(const Matrix&, const Matrix&)>;

  BilinearFrame(std::size_t dim_a, std::size_t dim_b, Evaluator evaluator);

  /// tr(L (E (x) F)) for any operator L on A (x) B.
  static BilinearFrame from_operator(const Matrix& op, std::size_t dim_a, std::size_t dim_b);

  double operator()(const Matrix& a, const Matrix& b) const { return evaluator_(a, b); }
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }

 private:
  std::size_t dim_a_;
  std::size_t dim_b_;
  Evaluator evaluator_;
};

/// table[i][j] = f(S_ij), i the first outcome, j the branch outcome.
std::vector<std::vector<double>> tree_probabilities(const BilinearFrame& frame, const PovmTree& tree);

/// |sum_ij f(S_ij) - 1|
double tree_sum_defect(const BilinearFrame& frame, const PovmTree& tree);

/// L = sum_ij f(E_i, F_j) E~_i (x) F~_j, with E~, F~ the dual bases of the
/// sampled effect bases (D_A^2 and D_B^2 elements). DegenerateSpan if either
/// set is not a basis.
Matrix reconstruct_joint_operator(const BilinearFrame& frame, std::span<const Matrix> basis_a,
                                  std::span<const Matrix> basis_b);

/// Reconstruction sampled on the canonical standard measurements.
Matrix reconstruct_joint_operator(const BilinearFrame& frame);

/// max |tr(L (E (x) F)) - f(E, F)| over random effect pairs.
double frame_residual(const BilinearFrame& frame, const Matrix& op, std::size_t samples,
                      Xoshiro256& rng);

/// Swap operator S|a>|b> = |b>|a> on H_D (x) H_D.
Matrix swap_operator(std::size_t dim);

struct SwapReport {
  std::size_t dim = 0;
  double constant = 0.0;              // c in f(E, F) = tr(S (E (x) F)) / c, from the trivial tree
  double one_over_d2_trivial_sum = 0.0;  // trivial-tree sum with the constant 1/D^2 instead
  double min_frame_value = 0.0;       // over random effect pairs
  double max_tree_defect = 0.0;       // over random trees
  std::size_t trees = 0;
  double min_eigenvalue = 0.0;        // of the reconstructed L
  double witness_expectation = 0.0;   // <w|L|w>, w = (|01> - |10>)/sqrt 2
  double reconstruction_error = 0.0;  // ||L - S/c||_F
  Matrix reconstructed;
};

SwapReport swap_counterexample(std::size_t dim, std::size_t trees, std::size_t samples,
                               std::uint64_t seed);

struct DimensionCount {
  std::size_t product_span = 0;        // D_A D_B (D_A + 1)(D_B + 1) / 4
  std::size_t full_symmetric = 0;      // D_A D_B (D_A D_B + 1) / 2
  std::size_t product_span_rank = 0;   // numerical rank over real symmetric local bases
  std::size_t full_symmetric_rank = 0;
  std::size_t complex_product_rank = 0;  // over Hermitian local bases; (D_A D_B)^2
  std::vector<Matrix> null_directions;   // real symmetric, orthogonal to every product
};

DimensionCount real_dimension_count(std::size_t dim_a, std::size_t dim_b);

/// Nine product states on H_3 (x) H_3 forming an orthonormal basis, as
/// (factor on A, factor on B).
std::vector<std::pair<Vector, Vector>> domino_kets();

/// The rank-one projectors onto domino_kets(), as a POVM on H_9.
Povm domino_fixture();

}  // namespace qbayes
