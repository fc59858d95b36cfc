#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmlkit/density.hpp"
#include "qmlkit/gates.hpp"

namespace qmlkit {

/// Two k-bit features followed by an m-bit label register, 2k + m qubits.
struct QnnEncoding {
  int k = 1;
  int m = 1;

  int n_total() const { return 2 * k + m; }
  std::size_t n_params() const { return std::size_t{1} << (2 * n_total()); }
  void validate() const;
};

inline constexpr int kQnnMaxQubits = 6;

struct QnnExample {
  std::uint64_t x1;
  std::uint64_t x2;
  std::uint64_t y;
};

enum class QnnCost { Overlap, Pauli };

struct QnnTrainConfig {
  double eta = 0.1;
  int epochs = 500;
  double fd_step = 1e-4;
  QnnCost cost = QnnCost::Overlap;
  /// f_{i,j}: one row per example, columns for sigma_1..sigma_3. Empty means 1.
  RMatrix f_weights;
  /// Consecutive cost increases that trigger the divergence guard.
  int patience = 25;
};

struct QnnTrainResult {
  RVector params;
  /// Cost before training followed by the cost after every epoch.
  std::vector<double> trace;
  int epochs_run = 0;
  double final_eta = 0.0;
  bool stopped_early = false;
};

/// |bits(x1), bits(x2), 0^m>.
StateVector encode_example(std::uint64_t x1, std::uint64_t x2, const QnnEncoding& enc);

/// sigma_{k_1} x ... x sigma_{k_n} for the base-4 word w (k_1 most significant).
CMatrix pauli_word(std::uint64_t word, int n_qubits);

/// Generator sum_w alpha_w P_w.
CMatrix qnn_generator(const RVector& alphas, int n_qubits);

/// exp(i sum_w alpha_w P_w).
GateMatrix build_unitary(const RVector& alphas, const QnnEncoding& enc);

/// Label-register density after U |x1, x2, 0>.
DensityMatrix forward(const GateMatrix& u, const QnnEncoding& enc, std::uint64_t x1,
                      std::uint64_t x2);
DensityMatrix forward(const RVector& alphas, const QnnEncoding& enc, std::uint64_t x1,
                      std::uint64_t x2);

/// Overlap: -sum_j <y_j|rho_j|y_j>. Pauli: sum_j sum_q sum_i f_ij
/// (<sigma_i^(q)>_model - <sigma_i^(q)>_target)^2 over label qubits q.
double cost(const RVector& alphas, const QnnEncoding& enc, const std::vector<QnnExample>& data,
            const QnnTrainConfig& cfg);

/// Central differences with step cfg.fd_step.
RVector gradient(const RVector& alphas, const QnnEncoding& enc,
                 const std::vector<QnnExample>& data, const QnnTrainConfig& cfg);

/// Five-point stencil with the same step, for self-consistency checks.
RVector gradient_five_point(const RVector& alphas, const QnnEncoding& enc,
                            const std::vector<QnnExample>& data, const QnnTrainConfig& cfg);

/// alpha ~ U(-0.01, 0.01) with the identity-word coefficient set to 0.
RVector initial_parameters(const QnnEncoding& enc, RngStream& rng);

/// <y|rho_y|y> for one example.
double label_fidelity(const RVector& alphas, const QnnEncoding& enc, const QnnExample& ex);

/// Gradient descent; after `patience` consecutive increases eta is halved
/// once, and the next such run stops training.
QnnTrainResult train(const QnnEncoding& enc, const std::vector<QnnExample>& data,
                     const QnnTrainConfig& cfg, RngStream& rng,
                     std::optional<RVector> init = std::nullopt);

}  // namespace qmlkit
