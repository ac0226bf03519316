#include "qbayes/effects.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qbayes/error.hpp"

namespace qbayes {
namespace {

constexpr double kBornClampFloor = 1e-9;
constexpr double kFrameResidualLimit = 1e-6;
constexpr double kSpanRcond = 1e-10;
constexpr double kBoundAgreement = 1e-9;

}  // namespace

Effect::Effect(Matrix op) : op_(std::move(op)) {
  if (op_.rows() != op_.cols() || op_.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "effect must be a nonempty square matrix");
  }
  if (hermiticity_defect(op_) > tol::kHermitian) {
    throw Error(ErrorKind::NotHermitian, "effect is not Hermitian");
  }
  op_ = 0.5 * (op_ + op_.adjoint());
  const RealVector spectrum = eig_hermitian(op_).eigenvalues;
  if (spectrum.minCoeff() < -kTolerance) {
    throw Error(ErrorKind::NotPsd, "effect eigenvalue " + std::to_string(spectrum.minCoeff()));
  }
  if (spectrum.maxCoeff() > 1.0 + kTolerance) {
    throw Error(ErrorKind::InvalidArgument,
                "effect eigenvalue " + std::to_string(spectrum.maxCoeff()) + " exceeds 1");
  }
}

std::vector<Matrix> Povm::operators() const {
  std::vector<Matrix> ops;
  ops.reserve(elements_.size());
  for (const auto& e : elements_) ops.push_back(e.op());
  return ops;
}

Povm validate_povm(std::span<const Matrix> candidate) {
  if (candidate.empty()) {
    throw Error(ErrorKind::InvalidArgument, "a POVM needs at least one element");
  }
  const Eigen::Index dim = candidate.front().rows();
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const Matrix& m = candidate[i];
    if (m.rows() != dim || m.cols() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "POVM elements differ in dimension");
    }
    const double lambda_min = min_eigenvalue(m);
    if (lambda_min < -tol::kPsd) throw NotPsdError(i, lambda_min);
    sum += m;
  }
  const double deficit = (sum - identity(static_cast<std::size_t>(dim))).norm();
  if (deficit > Povm::kResolutionTolerance) throw NotResolutionError(deficit);

  std::vector<Effect> effects;
  effects.reserve(candidate.size());
  for (const auto& m : candidate) effects.emplace_back(m);
  return Povm(std::move(effects));
}

Povm random_povm(std::size_t dim, std::size_t outcomes, Xoshiro256& rng) {
  const auto ops = random_povm_elements(dim, outcomes, rng);
  return validate_povm(ops);
}

Povm computational_basis_povm(std::size_t dim) {
  std::vector<Matrix> ops;
  for (std::size_t j = 0; j < dim; ++j) ops.push_back(projector(basis_ket(dim, j)));
  return validate_povm(ops);
}

std::vector<Matrix> build_ic_projectors(std::size_t dim) {
  if (dim < 2) throw Error(ErrorKind::InvalidArgument, "IC construction needs D >= 2");
  std::vector<Matrix> out;
  out.reserve(dim * dim);
  for (std::size_t j = 0; j < dim; ++j) out.push_back(projector(basis_ket(dim, j)));
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = j + 1; k < dim; ++k) {
      out.push_back(projector(basis_ket(dim, j) + basis_ket(dim, k)));
    }
  }
  const Complex i_unit(0.0, 1.0);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = j + 1; k < dim; ++k) {
      out.push_back(projector(basis_ket(dim, j) + i_unit * basis_ket(dim, k)));
    }
  }
  return out;
}

RealMatrix operator_gram(std::span<const Matrix> ops) {
  const auto n = static_cast<Eigen::Index>(ops.size());
  RealMatrix gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      gram(i, j) = hs_inner(ops[static_cast<std::size_t>(i)], ops[static_cast<std::size_t>(j)]).real();
      gram(j, i) = gram(i, j);
    }
  }
  return gram;
}

double smallest_gram_singular_value(std::span<const Matrix> ops) {
  Eigen::JacobiSVD<RealMatrix> svd(operator_gram(ops));
  return svd.singularValues().minCoeff();
}

MinimalIcPovm gram_renormalize(std::span<const Matrix> projectors) {
  if (projectors.empty()) throw Error(ErrorKind::InvalidArgument, "no operators to renormalize");
  const Eigen::Index dim = projectors.front().rows();
  Matrix gram = Matrix::Zero(dim, dim);
  for (const auto& p : projectors) {
    if (p.rows() != dim || p.cols() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "operators differ in dimension");
    }
    if (min_eigenvalue(p) < -tol::kPsd) throw Error(ErrorKind::NotPsd, "operator is not PSD");
    gram += p;
  }
  {
    const RealMatrix g = operator_gram(projectors);
    Eigen::JacobiSVD<RealMatrix> svd(g);
    const RealVector sv = svd.singularValues();
    if (sv(sv.size() - 1) < kSpanRcond * sv(0)) {
      throw Error(ErrorKind::DegenerateSpan, "operators are not linearly independent");
    }
  }
  const RealVector spectrum = eig_hermitian(gram).eigenvalues;
  if (spectrum(spectrum.size() - 1) < tol::kPinv * spectrum(0)) {
    throw Error(ErrorKind::SingularGram,
                "lambda_min(G) = " + std::to_string(spectrum(spectrum.size() - 1)));
  }
  const Matrix g_inv_sqrt = inv_sqrt_psd(gram);
  std::vector<Matrix> elements;
  elements.reserve(projectors.size());
  for (const auto& p : projectors) {
    Matrix e = g_inv_sqrt * p * g_inv_sqrt;
    elements.push_back(0.5 * (e + e.adjoint()));
  }
  return MinimalIcPovm{validate_povm(elements), std::move(gram),
                       std::vector<Matrix>(projectors.begin(), projectors.end())};
}

MinimalIcPovm standard_ic_povm(std::size_t dim) {
  const auto projectors = build_ic_projectors(dim);
  return gram_renormalize(projectors);
}

std::vector<Matrix> dual_basis(std::span<const Matrix> ops) {
  if (ops.empty()) throw Error(ErrorKind::DegenerateSpan, "empty operator set");
  const auto dim = static_cast<std::size_t>(ops.front().rows());
  if (ops.size() != dim * dim) {
    throw Error(ErrorKind::DegenerateSpan, "a dual basis needs exactly D^2 operators");
  }
  const RealMatrix gram = operator_gram(ops);
  Eigen::FullPivLU<RealMatrix> lu(gram);
  lu.setThreshold(kSpanRcond);
  if (!lu.isInvertible()) throw Error(ErrorKind::DegenerateSpan, "operators are not independent");
  const RealMatrix inv = lu.inverse();
  std::vector<Matrix> dual(ops.size(), Matrix::Zero(static_cast<Eigen::Index>(dim),
                                                    static_cast<Eigen::Index>(dim)));
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t k = 0; k < ops.size(); ++k) {
      dual[i] += inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * ops[k];
    }
  }
  return dual;
}

std::vector<double> born(const DensityOperator& state, const Povm& povm) {
  if (state.dim() != povm.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state and POVM dimensions differ");
  }
  std::vector<double> probs;
  probs.reserve(povm.size());
  for (const auto& e : povm.elements()) {
    // tr(rho E) is real for Hermitian arguments.
    double p = hs_inner(state.op(), e.op()).real();
    if (p < 0.0) {
      if (p < -kBornClampFloor) {
        throw Error(ErrorKind::NotPsd, "negative outcome probability " + std::to_string(p));
      }
      p = 0.0;
    }
    probs.push_back(p);
  }
  return probs;
}

FrameFunction::Key FrameFunction::key_of(const Matrix& op) {
  Key key;
  key.reserve(static_cast<std::size_t>(2 * op.size() + 1));
  key.push_back(op.rows());
  for (Eigen::Index j = 0; j < op.cols(); ++j) {
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
      key.push_back(std::llround(op(i, j).real() * 1e12));
      key.push_back(std::llround(op(i, j).imag() * 1e12));
    }
  }
  return key;
}

void FrameFunction::assign(const Effect& effect, double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "frame value " + std::to_string(value) + " not in [0,1]");
  }
  Key key = key_of(effect.op());
  if (auto it = index_.find(key); it != index_.end()) {
    const double existing = entries_[it->second].second;
    if (std::abs(existing - value) > 1e-12) {
      throw Error(ErrorKind::InvalidArgument, "effect already assigned a different value");
    }
    return;
  }
  index_.emplace(std::move(key), entries_.size());
  entries_.emplace_back(effect, value);
}

void FrameFunction::record_povm(const Povm& povm, std::span<const double> values) {
  if (values.size() != povm.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one value per POVM element required");
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error(ErrorKind::InvalidArgument,
                "frame values over a POVM sum to " + std::to_string(sum));
  }
  for (std::size_t i = 0; i < values.size(); ++i) assign(povm[i], values[i]);
}

std::optional<double> FrameFunction::value(const Effect& effect) const {
  if (auto it = index_.find(key_of(effect.op())); it != index_.end()) {
    return entries_[it->second].second;
  }
  return std::nullopt;
}

FrameFunction FrameFunction::from_state(const DensityOperator& state, const Povm& povm) {
  FrameFunction f;
  const auto probs = born(state, povm);
  f.record_povm(povm, probs);
  return f;
}

FrameReconstruction reconstruct_from_frame(const FrameFunction& frame) {
  if (frame.size() == 0) throw Error(ErrorKind::DegenerateSpan, "empty frame function");
  const std::size_t dim = frame.entries().front().first.dim();
  const std::vector<Matrix> basis = hermitian_basis(dim);
  const auto unknowns = static_cast<Eigen::Index>(basis.size());
  const auto samples = static_cast<Eigen::Index>(frame.size());
  if (samples < unknowns) {
    throw Error(ErrorKind::DegenerateSpan, "need at least D^2 sampled effects");
  }

  RealMatrix design(samples, unknowns);
  RealVector rhs(samples);
  for (Eigen::Index i = 0; i < samples; ++i) {
    const auto& [effect, value] = frame.entries()[static_cast<std::size_t>(i)];
    if (effect.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "mixed effect dimensions");
    for (Eigen::Index a = 0; a < unknowns; ++a) {
      design(i, a) = hs_inner(basis[static_cast<std::size_t>(a)], effect.op()).real();
    }
    rhs(i) = value;
  }

  Eigen::JacobiSVD<RealMatrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector sv = svd.singularValues();
  if (sv(sv.size() - 1) < kSpanRcond * sv(0)) {
    throw Error(ErrorKind::DegenerateSpan, "sampled effects do not span the Hermitian operators");
  }
  const RealVector x = svd.solve(rhs);

  FrameReconstruction out;
  out.residual = (design * x - rhs).norm();
  if (out.residual > kFrameResidualLimit) {
    throw Error(ErrorKind::DegenerateSpan,
                "frame values are inconsistent with any linear functional (residual " +
                    std::to_string(out.residual) + ")");
  }
  out.op = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index a = 0; a < unknowns; ++a) out.op += x(a) * basis[static_cast<std::size_t>(a)];
  out.check = check_state(out.op);
  if (out.check.ok) out.state = clamp_to_state(out.op);
  return out;
}

CertaintyBound certainty_bound(std::size_t dim) {
  if (dim < 2) throw Error(ErrorKind::InvalidArgument, "certainty bound needs D >= 2");
  CertaintyBound b;
  b.dim = dim;
  const double d = static_cast<double>(dim);
  const double cot = 1.0 / std::tan(3.0 * std::numbers::pi / (4.0 * d));
  b.closed_form = 1.0 / (d - 0.5 * (1.0 + cot));

  const MinimalIcPovm sqm = standard_ic_povm(dim);
  const RealVector spectrum = eig_hermitian(sqm.gram).eigenvalues;
  b.numerical = 1.0 / spectrum(spectrum.size() - 1);

  b.agrees = std::abs(b.closed_form - b.numerical) <= kBoundAgreement;
  if (b.agrees) {
    b.value = b.closed_form;
  } else {
    b.value = b.numerical;
    b.warning = "closed form " + std::to_string(b.closed_form) +
                " disagrees with lambda_max(G^-1) = " + std::to_string(b.numerical) +
                "; reporting the numerical value";
  }
  return b;
}

std::vector<double> max_probability(const Povm& povm) {
  std::vector<double> out;
  out.reserve(povm.size());
  for (const auto& e : povm.elements()) out.push_back(max_eigenvalue(e.op()));
  return out;
}

Povm povm_from_dilation(const DensityOperator& rho_ancilla, const Matrix& coupling,
                        const Povm& ancilla_projectors) {
  const std::size_t dim_anc = rho_ancilla.dim();
  if (ancilla_projectors.dim() != dim_anc || coupling.rows() != coupling.cols() ||
      static_cast<std::size_t>(coupling.rows()) % dim_anc != 0) {
    throw Error(ErrorKind::DimensionMismatch, "coupling must act on system (x) ancilla");
  }
  if (unitarity_defect(coupling) > 1e-9) throw Error(ErrorKind::NotUnitary, "coupling is not unitary");
  const std::size_t dim_sys = static_cast<std::size_t>(coupling.rows()) / dim_anc;
  const Matrix id_sys = identity(dim_sys);
  const Matrix weight = tensor(id_sys, rho_ancilla.op());

  std::vector<Matrix> elements;
  elements.reserve(ancilla_projectors.size());
  for (const auto& pi : ancilla_projectors.elements()) {
    if ((pi.op() * pi.op() - pi.op()).norm() > 1e-9) {
      throw Error(ErrorKind::InvalidArgument, "ancilla measurement must be projective");
    }
    const Matrix heis = coupling.adjoint() * tensor(id_sys, pi.op()) * coupling;
    Matrix e = partial_trace(weight * heis, dim_sys, dim_anc, Side::B);
    elements.push_back(0.5 * (e + e.adjoint()));
  }
  return validate_povm(elements);
}

}  // namespace qbayes
