#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qmlkit {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Largest register the dense simulator will allocate (2^24 amplitudes).
inline constexpr int kMaxQubits = 24;

/// Tolerance for normalization, hermiticity and unitarity checks.
inline constexpr double kTolerance = 1e-9;

/// Raised when an input violates a mathematical precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a request exceeds a configured limit (qubit cap, bit budget).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline int log2_exact(std::uint64_t v) {
  int n = 0;
  while ((std::uint64_t{1} << n) < v) ++n;
  return n;
}

/// Bit shift of qubit `position` in an n-qubit register; position 0 is the
/// leftmost ket symbol, i.e. the most significant bit of the basis index.
inline int qubit_shift(int n_qubits, int position) { return n_qubits - 1 - position; }

}  // namespace qmlkit
