#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmlkit/gates.hpp"

namespace qmlkit {

struct CircuitStep {
  GateMatrix gate;
  std::vector<int> targets;
  /// Gate name for serialization ("H", "CR", ...); "matrix" for raw gates.
  std::string label = "matrix";
  std::optional<double> phase;
};

/// Ordered list of gate applications on a fixed register.
class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<CircuitStep>& steps() const { return steps_; }

  Circuit& add(GateMatrix gate, std::vector<int> targets, std::string label = "matrix",
               std::optional<double> phase = std::nullopt);

  /// Adds a named standard gate. A leading "C" makes it controlled, with the
  /// control as the first target ("CR", "CX", "CSWAP").
  Circuit& add(std::string_view name, std::vector<int> targets,
               std::optional<double> phase = std::nullopt);

  /// Full 2^n x 2^n matrix of the circuit, built by running every basis state.
  CMatrix to_matrix() const;

 private:
  int n_qubits_;
  std::vector<CircuitStep> steps_;
};

StateVector run_circuit(const Circuit& c, const StateVector& psi);

/// {"n_qubits": n, "steps": [{"gate": "H", "targets": [0]}, ...]}.
/// Raw gates are written as {"gate": "matrix", "matrix": [[[re, im], ...], ...]}.
std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& text);

/// Parses a square complex matrix from nested [[[re, im], ...], ...] JSON
/// (plain real numbers are also accepted for entries).
CMatrix matrix_from_json(const std::string& text);

}  // namespace qmlkit
