#pragma once

#include <vector>

#include "qmlkit/circuit.hpp"

namespace qmlkit {

/// y_k = 1/sqrt(N) sum_j x_j e^{2 pi i k j / N}.
CVector classical_dft(const CVector& x);

/// x_j = 1/sqrt(N) sum_k y_k e^{-2 pi i k j / N}.
CVector inverse_dft(const CVector& y);

/// Largest register for which dense Fourier matrices are built.
inline constexpr int kDenseQftMaxQubits = 12;

/// F_jk = omega^{jk} / sqrt(N), omega = e^{2 pi i / N}.
GateMatrix qft_gate(int n_qubits);
GateMatrix inverse_qft_gate(int n_qubits);

/// Qubit-reversal SWAPs followed by the Hadamard / controlled-phase ladder.
Circuit qft_circuit(int n_qubits);

struct PhaseEstimate {
  int n_control;
  std::uint64_t measured_register;
  /// measured_register / 2^n_control.
  double theta_estimate;
  /// Probability of the nearest n-bit approximation of the true phase.
  double success_probability;
  /// arg <phi|U|phi> / 2 pi, reduced to [0, 1).
  double true_theta;
  /// true_theta - nearest / 2^n, in [-2^-(n+1), 2^-(n+1)].
  double delta;
  std::uint64_t nearest_register;
  /// Pre-measurement distribution of the control register.
  std::vector<double> distribution;
};

/// Eigenvector residual accepted by phase_estimate.
inline constexpr double kEigenResidualTolerance = 1e-6;

/// Controls in |+>, controlled U^(2^(n-1-p)) from control position p, inverse
/// QFT on the controls, then one measurement of the control register.
PhaseEstimate phase_estimate(const GateMatrix& u, const StateVector& eigenvector, int n_control,
                             RngStream& rng);

/// Control-register distribution before measurement, without sampling.
std::vector<double> phase_register_distribution(const GateMatrix& u, const StateVector& eigenvector,
                                                int n_control);

/// |(1 - e^{2 pi i 2^n delta}) / (1 - e^{2 pi i delta})|^2 / 2^{2n}; 1 at delta = 0.
double rounding_success_probability(double delta, int n_control);

}  // namespace qmlkit
