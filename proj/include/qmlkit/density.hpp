#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qmlkit/state.hpp"

namespace qmlkit {

/// Hermitian, trace-one, positive semidefinite matrix.
///
/// The eigenvalue check (>= -1e-9) runs for dim <= 2^12; larger inputs skip
/// it and set `psd_checked()` to false.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix matrix);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  int n_qubits() const { return n_qubits_; }
  const CMatrix& matrix() const { return matrix_; }
  bool psd_checked() const { return psd_checked_; }

 private:
  int n_qubits_;
  CMatrix matrix_;
  bool psd_checked_ = true;
};

inline constexpr int kPsdCheckMaxQubits = 12;

DensityMatrix pure_density(const StateVector& psi);

DensityMatrix mixed_density(std::span<const std::pair<double, StateVector>> parts);

double trace_expectation(const DensityMatrix& rho, const Observable& obs);

/// Reduced density on `keep`, in the listed order (keep[0] most significant).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

}  // namespace qmlkit
