#include "qbayes/instruments.hpp"

#include <cmath>
#include <string>

#include "qbayes/error.hpp"

namespace qbayes {
namespace {

constexpr double kUnitaryTolerance = 1e-9;
constexpr double kRefinementTolerance = 1e-8;

// (I (x) <row|) m (I (x) |col>) for m on H_S (x) H_anc.
Matrix ancilla_element(const Matrix& m, std::size_t dim_sys, std::size_t dim_anc, std::size_t row,
                       std::size_t col) {
  const auto ds = static_cast<Eigen::Index>(dim_sys);
  const auto da = static_cast<Eigen::Index>(dim_anc);
  Matrix out(ds, ds);
  for (Eigen::Index s1 = 0; s1 < ds; ++s1) {
    for (Eigen::Index s2 = 0; s2 < ds; ++s2) {
      out(s1, s2) = m(s1 * da + static_cast<Eigen::Index>(row), s2 * da + static_cast<Eigen::Index>(col));
    }
  }
  return out;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

KrausInstrument::KrausInstrument(std::vector<std::vector<Matrix>> outcomes)
    : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw Error(ErrorKind::InvalidArgument, "instrument has no outcomes");
  for (const auto& ops : outcomes_) {
    if (ops.empty()) throw Error(ErrorKind::InvalidArgument, "outcome without Kraus operators");
  }
  const Eigen::Index dim = outcomes_.front().front().rows();
  dim_ = static_cast<std::size_t>(dim);
  Matrix total = Matrix::Zero(dim, dim);
  for (const auto& ops : outcomes_) {
    for (const auto& a : ops) {
      if (a.rows() != dim || a.cols() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "Kraus operators differ in dimension");
      }
      total += a.adjoint() * a;
    }
  }
  const double defect = (total - identity(dim_)).norm();
  if (defect > kCompletenessTolerance) {
    throw Error(ErrorKind::NotResolution,
                "sum of A^dagger A misses the identity by " + std::to_string(defect));
  }
}

bool KrausInstrument::efficient() const noexcept {
  for (const auto& ops : outcomes_) {
    if (ops.size() != 1) return false;
  }
  return true;
}

Matrix KrausInstrument::effect(std::size_t d) const {
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (const auto& a : outcomes_.at(d)) e += a.adjoint() * a;
  return hermitian_part(e);
}

Povm KrausInstrument::povm() const {
  std::vector<Matrix> effects;
  effects.reserve(outcomes_.size());
  for (std::size_t d = 0; d < outcomes_.size(); ++d) effects.push_back(effect(d));
  return validate_povm(effects);
}

std::vector<OutcomeUpdate> apply_instrument(const DensityOperator& state,
                                            const KrausInstrument& instrument) {
  if (state.dim() != instrument.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state and instrument dimensions differ");
  }
  std::vector<OutcomeUpdate> out;
  out.reserve(instrument.size());
  for (const auto& ops : instrument.outcomes()) {
    Matrix unnormalized = Matrix::Zero(state.op().rows(), state.op().cols());
    for (const auto& a : ops) unnormalized += a * state.op() * a.adjoint();
    OutcomeUpdate update;
    update.probability = std::max(unnormalized.trace().real(), 0.0);
    if (update.probability > kProbabilityFloor) {
      update.posterior = DensityOperator(hermitian_part(unnormalized) / update.probability);
    }
    out.push_back(std::move(update));
  }
  return out;
}

KrausInstrument efficient_from_povm(const Povm& povm, std::span<const Matrix> unitaries) {
  if (!unitaries.empty() && unitaries.size() != povm.size()) {
    throw Error(ErrorKind::DimensionMismatch, "one readjustment unitary per outcome required");
  }
  std::vector<std::vector<Matrix>> outcomes;
  outcomes.reserve(povm.size());
  for (std::size_t d = 0; d < povm.size(); ++d) {
    Matrix a = sqrt_psd(povm[d].op());
    if (!unitaries.empty()) {
      const Matrix& u = unitaries[d];
      if (u.rows() != a.rows() || u.cols() != a.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "readjustment unitary has the wrong dimension");
      }
      if (unitarity_defect(u) > kUnitaryTolerance) {
        throw Error(ErrorKind::NotUnitary, "readjustment " + std::to_string(d) + " is not unitary");
      }
      a = u * a;
    }
    outcomes.push_back({std::move(a)});
  }
  return KrausInstrument(std::move(outcomes));
}

double UpdateFactorization::refinement_defect(const DensityOperator& prior) const {
  Matrix sum = Matrix::Zero(prior.op().rows(), prior.op().cols());
  for (const auto& o : outcomes) {
    if (o.refinement) sum += o.probability * o.refinement->op();
  }
  return (prior.op() - sum).norm();
}

UpdateFactorization factor_update(const DensityOperator& state, const KrausInstrument& instrument) {
  if (!instrument.efficient()) {
    throw Error(ErrorKind::InvalidArgument, "factor_update needs one Kraus operator per outcome");
  }
  if (state.dim() != instrument.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state and instrument dimensions differ");
  }
  const Matrix root = sqrt_psd(state.op());
  UpdateFactorization out;
  out.outcomes.reserve(instrument.size());
  for (std::size_t d = 0; d < instrument.size(); ++d) {
    const Matrix& a = instrument.kraus(d).front();
    const Matrix x = a * root;
    OutcomeFactor f;
    const Matrix refined = hermitian_part(x.adjoint() * x);  // rho^{1/2} E_d rho^{1/2}
    const Matrix collapsed = hermitian_part(x * x.adjoint());  // A_d rho A_d^dagger
    f.probability = std::max(refined.trace().real(), 0.0);
    f.readjustment = polar_unitary(x);
    if (f.probability > kProbabilityFloor) {
      f.refinement = DensityOperator(refined / f.probability);
      f.posterior = DensityOperator(collapsed / f.probability);
    }
    out.outcomes.push_back(std::move(f));
  }
  return out;
}

KrausInstrument instrument_from_dilation(const DensityOperator& rho_ancilla, const Matrix& coupling,
                                         const Povm& ancilla_projectors) {
  const std::size_t dim_anc = rho_ancilla.dim();
  if (ancilla_projectors.dim() != dim_anc || coupling.rows() != coupling.cols() ||
      static_cast<std::size_t>(coupling.rows()) % dim_anc != 0) {
    throw Error(ErrorKind::DimensionMismatch, "coupling must act on system (x) ancilla");
  }
  if (unitarity_defect(coupling) > kUnitaryTolerance) {
    throw Error(ErrorKind::NotUnitary, "coupling is not unitary");
  }
  const std::size_t dim_sys = static_cast<std::size_t>(coupling.rows()) / dim_anc;
  const EigDecomposition anc = eig_hermitian(rho_ancilla.op());
  const Matrix id_sys = identity(dim_sys);

  std::vector<std::vector<Matrix>> outcomes;
  outcomes.reserve(ancilla_projectors.size());
  for (const auto& pi : ancilla_projectors.elements()) {
    const Matrix projected = tensor(id_sys, pi.op()) * coupling;
    std::vector<Matrix> ops;
    for (std::size_t a = 0; a < dim_anc; ++a) {
      const double weight = anc.eigenvalues(static_cast<Eigen::Index>(a));
      if (weight <= 0.0) continue;
      // Rotate the input leg into the eigenbasis of rho_A: |a> = V e_a.
      const Matrix rotated = projected * tensor(id_sys, anc.eigenvectors);
      for (std::size_t b = 0; b < dim_anc; ++b) {
        Matrix k = std::sqrt(weight) * ancilla_element(rotated, dim_sys, dim_anc, b, a);
        if (k.norm() > 1e-14) ops.push_back(std::move(k));
      }
    }
    if (ops.empty()) ops.push_back(Matrix::Zero(coupling.rows() / static_cast<Eigen::Index>(dim_anc),
                                                coupling.rows() / static_cast<Eigen::Index>(dim_anc)));
    outcomes.push_back(std::move(ops));
  }
  return KrausInstrument(std::move(outcomes));
}

Dilation dilation_from_instrument(const KrausInstrument& instrument) {
  if (!instrument.efficient()) {
    throw Error(ErrorKind::InvalidArgument, "dilation_from_instrument needs an efficient instrument");
  }
  const std::size_t ds = instrument.dim();
  const std::size_t da = instrument.size();
  const auto total = static_cast<Eigen::Index>(ds * da);

  Matrix isometry(total, static_cast<Eigen::Index>(ds));
  for (std::size_t s = 0; s < ds; ++s) {
    for (std::size_t d = 0; d < da; ++d) {
      const Matrix& a = instrument.kraus(d).front();
      for (std::size_t out = 0; out < ds; ++out) {
        isometry(static_cast<Eigen::Index>(out * da + d), static_cast<Eigen::Index>(s)) =
            a(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(s));
      }
    }
  }
  // Orthonormal basis of the complement of the isometry's range.
  const Matrix complement = identity(static_cast<std::size_t>(total)) - isometry * isometry.adjoint();
  const EigDecomposition eig = eig_hermitian(hermitian_part(complement));

  Matrix coupling = Matrix::Zero(total, total);
  std::size_t next = 0;
  for (std::size_t s = 0; s < ds; ++s) {
    for (std::size_t d = 0; d < da; ++d) {
      const auto column = static_cast<Eigen::Index>(s * da + d);
      if (d == 0) {
        coupling.col(column) = isometry.col(static_cast<Eigen::Index>(s));
      } else {
        coupling.col(column) = eig.eigenvectors.col(static_cast<Eigen::Index>(next++));
      }
    }
  }
  return Dilation{DensityOperator::pure(basis_ket(da, 0)), std::move(coupling),
                  computational_basis_povm(da)};
}

std::vector<OutcomeUpdate> apply_dilation(const DensityOperator& system, const Dilation& dilation) {
  const std::size_t da = dilation.ancilla_state.dim();
  const std::size_t ds = system.dim();
  if (static_cast<std::size_t>(dilation.coupling.rows()) != ds * da) {
    throw Error(ErrorKind::DimensionMismatch, "dilation does not act on this system");
  }
  const Matrix joint = dilation.coupling * tensor(system.op(), dilation.ancilla_state.op()) *
                       dilation.coupling.adjoint();
  std::vector<OutcomeUpdate> out;
  for (const auto& pi : dilation.ancilla_projectors.elements()) {
    const Matrix proj = tensor(identity(ds), pi.op());
    const Matrix reduced = partial_trace(proj * joint * proj, ds, da, Side::B);
    OutcomeUpdate update;
    update.probability = std::max(reduced.trace().real(), 0.0);
    if (update.probability > kProbabilityFloor) {
      update.posterior = DensityOperator(hermitian_part(reduced) / update.probability);
    }
    out.push_back(std::move(update));
  }
  return out;
}

Povm identify_measurement(const DensityOperator& state, std::span<const RefinementTerm> refinement) {
  Matrix sum = Matrix::Zero(state.op().rows(), state.op().cols());
  for (const auto& term : refinement) {
    if (term.refinement.rows() != sum.rows() || term.refinement.cols() != sum.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "refinement term has the wrong dimension");
    }
    sum += term.probability * term.refinement;
  }
  const double defect = (sum - state.op()).norm();
  if (defect > kRefinementTolerance) {
    throw Error(ErrorKind::InconsistentRefinement,
                "sum P(d) rho~_d differs from rho by " + std::to_string(defect));
  }
  Matrix inv_root;
  try {
    inv_root = inv_sqrt_psd(state.op());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularOperator) throw;
    throw Error(ErrorKind::RankDeficientState, "rho is singular; rho^{-1/2} does not exist");
  }
  std::vector<Matrix> effects;
  effects.reserve(refinement.size());
  for (const auto& term : refinement) {
    effects.push_back(hermitian_part(term.probability * inv_root * term.refinement * inv_root));
  }
  return validate_povm(effects);
}

RemoteMeasurement remote_measurement(const Vector& joint, std::size_t dim,
                                     const KrausInstrument& instrument_on_a) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (joint.size() != d * d || instrument_on_a.dim() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "remote_measurement needs dim A = dim B");
  }
  if (!instrument_on_a.efficient()) {
    throw Error(ErrorKind::InvalidArgument, "remote_measurement needs an efficient instrument");
  }
  const Vector psi = joint / joint.norm();
  // psi = sum_ij C_ij |i>|j>; C = W S X^dagger gives the Schmidt form
  // sum_k s_k (W e_k) (x) (conj(X) e_k).
  Matrix coeff(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) coeff(i, j) = psi(i * d + j);
  }
  Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix a_basis = svd.matrixU();
  const Matrix b_basis = svd.matrixV().conjugate();

  const Matrix joint_op = psi * psi.adjoint();
  RemoteMeasurement out;
  out.marginal_before = partial_trace(joint_op, dim, dim, Side::A);
  const Matrix root = sqrt_psd(hermitian_part(out.marginal_before));
  out.marginal_after = Matrix::Zero(d, d);

  for (std::size_t k = 0; k < instrument_on_a.size(); ++k) {
    const Matrix& a = instrument_on_a.kraus(k).front();
    const Matrix local = tensor(a, identity(dim));
    const Matrix conditional = partial_trace(local * joint_op * local.adjoint(), dim, dim, Side::A);

    // <b_j|F|b_k> = <a_k|E|a_j>
    const Matrix in_schmidt = a_basis.adjoint() * instrument_on_a.effect(k) * a_basis;
    const Matrix pulled = hermitian_part(b_basis * in_schmidt.transpose() * b_basis.adjoint());
    out.pulled_back.push_back(pulled);

    RemoteOutcome o;
    o.probability = std::max(conditional.trace().real(), 0.0);
    out.marginal_after += conditional;
    if (o.probability > kProbabilityFloor) {
      o.conditional = hermitian_part(conditional) / o.probability;
      o.refined = hermitian_part(root * pulled * root) / o.probability;
    }
    out.outcomes.push_back(std::move(o));
  }
  return out;
}

std::vector<SqmTransitionOutcome> sqm_transition(const UpdateFactorization& factorization,
                                                 const MinimalIcPovm& sqm) {
  const auto ops = sqm.base.operators();
  const auto dual = dual_basis(ops);
  std::vector<SqmTransitionOutcome> out;
  out.reserve(factorization.outcomes.size());
  for (const auto& f : factorization.outcomes) {
    SqmTransitionOutcome t;
    t.probability = f.probability;
    if (f.refinement && f.posterior) {
      const auto n = static_cast<Eigen::Index>(ops.size());
      t.gamma.resize(n, n);
      for (std::size_t h = 0; h < ops.size(); ++h) {
        t.conditional.push_back(hs_inner(f.refinement->op(), ops[h]).real());
        t.posterior.push_back(hs_inner(f.posterior->op(), ops[h]).real());
        Matrix readjusted = f.readjustment.adjoint() * ops[h] * f.readjustment;
        for (std::size_t hp = 0; hp < ops.size(); ++hp) {
          t.gamma(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(hp)) =
              hs_inner(dual[hp], readjusted).real();
        }
        t.readjusted.push_back(std::move(readjusted));
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace qbayes
