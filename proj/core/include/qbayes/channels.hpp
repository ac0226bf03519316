#pragma once

// Trace-preserving channels, their Choi matrices, and the remote-steering
// experiment in which a far measurement changes which channel one ascribes
// to a controlled-unitary gate.

#include <cstdint>
#include <vector>

#include "qbayes/density_operator.hpp"
#include "qbayes/effects.hpp"
#include "qbayes/linalg.hpp"

namespace qbayes {

class QuantumChannel {
 public:
  static constexpr double kTolerance = 1e-9;

  /// NotTp unless sum A^dagger A = I to 1e-9.
  explicit QuantumChannel(std::vector<Matrix> kraus);

  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(kraus_.front().cols()); }

  Matrix apply(const Matrix& rho) const;
  DensityOperator apply(const DensityOperator& rho) const;

  static QuantumChannel identity_channel(std::size_t dim);
  static QuantumChannel unitary(const Matrix& u);
  /// rho -> tr(rho) I / D
  static QuantumChannel fully_depolarizing(std::size_t dim);

 private:
  std::vector<Matrix> kraus_;
};

/// (I (x) Phi)(|psi_ME><psi_ME|) on input (x) output.
class ChoiMatrix {
 public:
  static constexpr double kTolerance = 1e-9;

  /// NotCp if not PSD, NotTp if tr_out != I/D.
  explicit ChoiMatrix(Matrix op);

  const Matrix& op() const noexcept { return op_; }
  std::size_t dim() const noexcept { return dim_; }

 private:
  Matrix op_;
  std::size_t dim_ = 0;
};

/// (1/sqrt D) sum_i |i>|i>
Vector maximally_entangled(std::size_t dim);

ChoiMatrix channel_choi(const QuantumChannel& channel);
QuantumChannel choi_channel(const ChoiMatrix& choi);

/// Choi operator of an arbitrary linear map given by its action on
/// matrix units, without any CP/TP check.
Matrix choi_of_map(std::size_t dim, const std::function<Matrix(const Matrix&)>& map);

/// Phi(rho) = |alpha|^2 U0 rho U0^dagger + |beta|^2 U1 rho U1^dagger.
/// NotNormalized unless |alpha|^2 + |beta|^2 = 1 to 1e-9; NotUnitary.
QuantumChannel controlled_unitary_channel(const Matrix& u0, const Matrix& u1, Complex alpha,
                                          Complex beta);

/// A far qubit F and a control qubit C share alpha|00> + beta|11>. C then
/// controls U0 or U1 on a target qubit T.
struct SteeringSetup {
  Complex alpha;
  Complex beta;
  Matrix u0;
  Matrix u1;

  static SteeringSetup random(std::uint64_t seed);
};

struct SteeringReport {
  std::vector<double> probabilities;       // far outcome probabilities
  std::vector<Matrix> conditional_choi;    // channel on T given far outcome k
  Matrix averaged_choi;                    // sum_k P(k) conditional_choi[k]
  Matrix unconditional_choi;               // Choi of controlled_unitary_channel
  double no_signaling_defect = 0.0;        // ||averaged - unconditional||_F
};

SteeringReport remote_steering_experiment(const Povm& far_measurement, const SteeringSetup& setup);

}  // namespace qbayes
