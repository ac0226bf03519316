#include "qbayes/locality.hpp"

#include <cmath>
#include <string>

#include "qbayes/error.hpp"
#include "qbayes/states.hpp"

namespace qbayes {
namespace {

constexpr double kRankTolerance = 1e-10;

std::size_t outcomes_between(Xoshiro256& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next_below(hi - lo + 1));
}

// Coordinates of a Hermitian operator in an orthonormal Hermitian basis.
RealVector coordinates(const Matrix& op, std::span<const Matrix> basis) {
  RealVector v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = hs_inner(basis[k], op).real();
  }
  return v;
}

std::size_t numerical_rank(const RealMatrix& m) {
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const RealVector s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > kRankTolerance * s(0)) ++rank;
  }
  return rank;
}

Matrix random_effect(std::size_t dim, Xoshiro256& rng) {
  return random_povm_elements(dim, 2, rng).front();
}

}  // namespace

std::size_t PovmTree::dim_a() const {
  return direction == Direction::AtoB ? first.dim() : branches.front().dim();
}

std::size_t PovmTree::dim_b() const {
  return direction == Direction::AtoB ? branches.front().dim() : first.dim();
}

PovmTree make_tree(PovmTree::Direction direction, Povm first, std::vector<Povm> branches) {
  if (branches.size() != first.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one branch per first outcome required");
  }
  for (const auto& b : branches) {
    if (b.dim() != branches.front().dim()) {
      throw Error(ErrorKind::DimensionMismatch, "branches act on different dimensions");
    }
  }
  return PovmTree{direction, std::move(first), std::move(branches)};
}

PovmTree random_tree(std::size_t dim_a, std::size_t dim_b, PovmTree::Direction direction,
                     Xoshiro256& rng) {
  const bool a_first = direction == PovmTree::Direction::AtoB;
  Povm first = random_povm(a_first ? dim_a : dim_b, outcomes_between(rng, 2, 5), rng);
  std::vector<Povm> branches;
  for (std::size_t i = 0; i < first.size(); ++i) {
    branches.push_back(random_povm(a_first ? dim_b : dim_a, outcomes_between(rng, 2, 5), rng));
  }
  return make_tree(direction, std::move(first), std::move(branches));
}

PovmTree trivial_tree(std::size_t dim_a, std::size_t dim_b) {
  const std::vector<Matrix> a{identity(dim_a)};
  const std::vector<Matrix> b{identity(dim_b)};
  return make_tree(PovmTree::Direction::AtoB, validate_povm(a), {validate_povm(b)});
}

BilinearFrame::BilinearFrame(std::size_t dim_a, std::size_t dim_b, Evaluator evaluator)
    : dim_a_(dim_a), dim_b_(dim_b), evaluator_(std::move(evaluator)) {}

BilinearFrame BilinearFrame::from_operator(const Matrix& op, std::size_t dim_a, std::size_t dim_b) {
  if (static_cast<std::size_t>(op.rows()) != dim_a * dim_b) {
    throw Error(ErrorKind::DimensionMismatch, "operator does not act on A (x) B");
  }
  return BilinearFrame(dim_a, dim_b, [op](const Matrix& a, const Matrix& b) {
    return hs_inner(op, tensor(a, b)).real();
  });
}

std::vector<std::vector<double>> tree_probabilities(const BilinearFrame& frame, const PovmTree& tree) {
  if (tree.dim_a() != frame.dim_a() || tree.dim_b() != frame.dim_b()) {
    throw Error(ErrorKind::DimensionMismatch, "tree and frame dimensions differ");
  }
  const bool a_first = tree.direction == PovmTree::Direction::AtoB;
  std::vector<std::vector<double>> table;
  table.reserve(tree.first.size());
  for (std::size_t i = 0; i < tree.first.size(); ++i) {
    std::vector<double> row;
    for (const auto& second : tree.branches[i].elements()) {
      const Matrix& first = tree.first[i].op();
      row.push_back(a_first ? frame(first, second.op()) : frame(second.op(), first));
    }
    table.push_back(std::move(row));
  }
  return table;
}

double tree_sum_defect(const BilinearFrame& frame, const PovmTree& tree) {
  double total = 0.0;
  for (const auto& row : tree_probabilities(frame, tree)) {
    for (double p : row) total += p;
  }
  return std::abs(total - 1.0);
}

Matrix reconstruct_joint_operator(const BilinearFrame& frame, std::span<const Matrix> basis_a,
                                  std::span<const Matrix> basis_b) {
  const auto dual_a = dual_basis(basis_a);
  const auto dual_b = dual_basis(basis_b);
  const auto n = static_cast<Eigen::Index>(frame.dim_a() * frame.dim_b());
  Matrix op = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < basis_a.size(); ++i) {
    for (std::size_t j = 0; j < basis_b.size(); ++j) {
      op += frame(basis_a[i], basis_b[j]) * tensor(dual_a[i], dual_b[j]);
    }
  }
  return op;
}

Matrix reconstruct_joint_operator(const BilinearFrame& frame) {
  const auto a = canonical_sqm(frame.dim_a())->base.operators();
  const auto b = canonical_sqm(frame.dim_b())->base.operators();
  return reconstruct_joint_operator(frame, a, b);
}

double frame_residual(const BilinearFrame& frame, const Matrix& op, std::size_t samples,
                      Xoshiro256& rng) {
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Matrix a = random_effect(frame.dim_a(), rng);
    const Matrix b = random_effect(frame.dim_b(), rng);
    worst = std::max(worst, std::abs(hs_inner(op, tensor(a, b)).real() - frame(a, b)));
  }
  return worst;
}

Matrix swap_operator(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix s = Matrix::Zero(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) s(b * d + a, a * d + b) = 1.0;
  }
  return s;
}

SwapReport swap_counterexample(std::size_t dim, std::size_t trees, std::size_t samples,
                               std::uint64_t seed) {
  if (dim < 2) throw Error(ErrorKind::InvalidArgument, "swap counterexample needs D >= 2");
  const Matrix swap = swap_operator(dim);
  SwapReport r;
  r.dim = dim;
  r.trees = trees;

  // Normalizing on the trivial tree: tr(S (I (x) I)) / c = 1.
  const BilinearFrame unnormalized = BilinearFrame::from_operator(swap, dim, dim);
  const double trivial = unnormalized(identity(dim), identity(dim));
  r.constant = trivial;
  r.one_over_d2_trivial_sum = trivial / static_cast<double>(dim * dim);

  const double c = r.constant;
  const BilinearFrame frame(dim, dim, [unnormalized, c](const Matrix& a, const Matrix& b) {
    return unnormalized(a, b) / c;
  });

  Xoshiro256 rng(seed);
  r.min_frame_value = 1e300;
  for (std::size_t s = 0; s < samples; ++s) {
    r.min_frame_value =
        std::min(r.min_frame_value, frame(random_effect(dim, rng), random_effect(dim, rng)));
  }
  for (std::size_t t = 0; t < trees; ++t) {
    const auto direction = t % 2 == 0 ? PovmTree::Direction::AtoB : PovmTree::Direction::BtoA;
    r.max_tree_defect = std::max(r.max_tree_defect, tree_sum_defect(frame, random_tree(dim, dim, direction, rng)));
  }

  r.reconstructed = reconstruct_joint_operator(frame);
  r.reconstruction_error = (r.reconstructed - swap / c).norm();
  r.min_eigenvalue = min_eigenvalue(0.5 * (r.reconstructed + r.reconstructed.adjoint()));
  const Vector w = (tensor(basis_ket(dim, 0), basis_ket(dim, 1)) -
                    tensor(basis_ket(dim, 1), basis_ket(dim, 0))) / std::sqrt(2.0);
  r.witness_expectation = (w.adjoint() * r.reconstructed * w)(0, 0).real();
  return r;
}

DimensionCount real_dimension_count(std::size_t dim_a, std::size_t dim_b) {
  if (dim_a < 2 || dim_b < 2) throw Error(ErrorKind::InvalidArgument, "dimensions must be >= 2");
  const std::size_t joint = dim_a * dim_b;
  DimensionCount out;
  out.product_span = dim_a * dim_b * (dim_a + 1) * (dim_b + 1) / 4;
  out.full_symmetric = joint * (joint + 1) / 2;

  const auto joint_basis = hermitian_basis(joint);
  const auto symmetric_joint = real_symmetric_basis(joint);

  const auto sym_a = real_symmetric_basis(dim_a);
  const auto sym_b = real_symmetric_basis(dim_b);
  RealMatrix products(static_cast<Eigen::Index>(joint_basis.size()),
                      static_cast<Eigen::Index>(sym_a.size() * sym_b.size()));
  // Same products in coordinates of the joint real-symmetric basis.
  RealMatrix in_symmetric(static_cast<Eigen::Index>(symmetric_joint.size()), products.cols());
  Eigen::Index col = 0;
  for (const auto& a : sym_a) {
    for (const auto& b : sym_b) {
      const Matrix p = tensor(a, b);
      products.col(col) = coordinates(p, joint_basis);
      in_symmetric.col(col) = coordinates(p, symmetric_joint);
      ++col;
    }
  }
  out.product_span_rank = numerical_rank(products);

  RealMatrix symmetric(static_cast<Eigen::Index>(joint_basis.size()),
                       static_cast<Eigen::Index>(symmetric_joint.size()));
  for (std::size_t k = 0; k < symmetric_joint.size(); ++k) {
    symmetric.col(static_cast<Eigen::Index>(k)) = coordinates(symmetric_joint[k], joint_basis);
  }
  out.full_symmetric_rank = numerical_rank(symmetric);

  const auto herm_a = hermitian_basis(dim_a);
  const auto herm_b = hermitian_basis(dim_b);
  RealMatrix complex_products(static_cast<Eigen::Index>(joint_basis.size()),
                              static_cast<Eigen::Index>(herm_a.size() * herm_b.size()));
  col = 0;
  for (const auto& a : herm_a) {
    for (const auto& b : herm_b) complex_products.col(col++) = coordinates(tensor(a, b), joint_basis);
  }
  out.complex_product_rank = numerical_rank(complex_products);

  // Left null space of the products inside the symmetric space.
  Eigen::JacobiSVD<RealMatrix> svd(in_symmetric, Eigen::ComputeFullU);
  const RealVector s = svd.singularValues();
  const double scale = s.size() > 0 ? s(0) : 1.0;
  for (Eigen::Index k = 0; k < svd.matrixU().cols(); ++k) {
    if (k < s.size() && s(k) > kRankTolerance * scale) continue;
    Matrix direction = Matrix::Zero(static_cast<Eigen::Index>(joint), static_cast<Eigen::Index>(joint));
    for (std::size_t m = 0; m < symmetric_joint.size(); ++m) {
      direction += svd.matrixU()(static_cast<Eigen::Index>(m), k) * symmetric_joint[m];
    }
    out.null_directions.push_back(std::move(direction));
  }
  return out;
}

std::vector<std::pair<Vector, Vector>> domino_kets() {
  const auto e = [](std::size_t k) { return basis_ket(3, k); };
  const double h = 1.0 / std::sqrt(2.0);
  const auto plus = [&](std::size_t a, std::size_t b) -> Vector { return h * (e(a) + e(b)); };
  const auto minus = [&](std::size_t a, std::size_t b) -> Vector { return h * (e(a) - e(b)); };
  return {
      {e(1), e(1)},         {e(0), plus(0, 1)},  {e(0), minus(0, 1)},
      {e(2), plus(1, 2)},   {e(2), minus(1, 2)}, {plus(1, 2), e(0)},
      {minus(1, 2), e(0)},  {plus(0, 1), e(2)},  {minus(0, 1), e(2)},
  };
}

Povm domino_fixture() {
  std::vector<Matrix> ops;
  for (const auto& [a, b] : domino_kets()) ops.push_back(projector(tensor(a, b)));
  return validate_povm(ops);
}

}  // namespace qbayes
