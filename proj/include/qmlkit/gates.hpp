#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qmlkit/state.hpp"
#include "qmlkit/types.hpp"

namespace qmlkit {

/// Square unitary matrix on a power-of-two dimension. Unitarity is checked
/// on construction (entrywise |U U^dagger - I| < 1e-9).
class GateMatrix {
 public:
  explicit GateMatrix(CMatrix matrix);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  int n_qubits() const { return n_qubits_; }
  const CMatrix& matrix() const { return matrix_; }

  GateMatrix adjoint() const;

  /// Matrix product: (a * b) applies b first.
  friend GateMatrix operator*(const GateMatrix& a, const GateMatrix& b);

 private:
  struct Trusted {};
  GateMatrix(CMatrix matrix, Trusted);

  int n_qubits_;
  CMatrix matrix_;

  friend GateMatrix power_of_two(const GateMatrix& u, int exponent);
};

enum class GateKind { X, Y, Z, I, H, Swap, Phase };

/// Accepts X, NOT, Y, Z, I, H, SWAP and R (phase gate), case-insensitive.
GateKind parse_gate_kind(std::string_view name);
std::string gate_kind_name(GateKind kind);

/// R(phase) is diag(1, e^{i phase}); every other kind ignores `phase`.
GateMatrix standard_gate(GateKind kind, std::optional<double> phase = std::nullopt);
GateMatrix standard_gate(std::string_view name, std::optional<double> phase = std::nullopt);

GateMatrix kron(std::span<const GateMatrix> gates);
GateMatrix kron(std::initializer_list<GateMatrix> gates);

/// Block-diagonal [I 0; 0 U] with the control as the most significant qubit.
GateMatrix controlled(const GateMatrix& u);

/// U^(2^exponent) by repeated squaring.
GateMatrix power_of_two(const GateMatrix& u, int exponent);

/// Applies `gate` to the qubits listed in `targets`; targets[0] is the most
/// significant qubit of the gate's own index. Cost O(2^n * 2^k).
StateVector apply(const GateMatrix& gate, std::span<const int> targets, const StateVector& psi);
StateVector apply(const GateMatrix& gate, std::initializer_list<int> targets,
                  const StateVector& psi);

/// Reversible embedding |x, y> -> |x, y XOR f(x)> on n_in + m_out qubits.
/// Throws DomainError when f(x) does not fit into m_out bits.
GateMatrix function_oracle(const std::function<std::uint64_t(std::uint64_t)>& f, int n_in,
                           int m_out);

namespace detail {

/// In-place strided update shared by gate application and the simulators.
void apply_matrix(const CMatrix& gate, std::span<const int> targets, int n_qubits,
                  CVector& amplitudes);

}  // namespace detail

}  // namespace qmlkit
