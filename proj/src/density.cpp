#include "qmlkit/density.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qmlkit {

DensityMatrix::DensityMatrix(CMatrix matrix) : matrix_(std::move(matrix)) {
  const Eigen::Index d = matrix_.rows();
  if (d < 2 || d != matrix_.cols() || !is_power_of_two(static_cast<std::uint64_t>(d)))
    throw DomainError("density matrix must be square with power-of-two dimension >= 2");
  n_qubits_ = log2_exact(static_cast<std::uint64_t>(d));
  if (n_qubits_ > kMaxQubits) throw ConfigError("density matrix exceeds qubit cap");

  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm >= kTolerance)
    throw DomainError("density matrix is not Hermitian (residual " + std::to_string(herm) + ")");
  const cplx tr = matrix_.trace();
  if (std::abs(tr - 1.0) > kTolerance)
    throw DomainError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");

  if (n_qubits_ <= kPsdCheckMaxQubits) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
    const double lowest = solver.eigenvalues().minCoeff();
    if (lowest < -kTolerance)
      throw DomainError("density matrix has negative eigenvalue " + std::to_string(lowest));
  } else {
    psd_checked_ = false;
  }
}

DensityMatrix pure_density(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  CMatrix rho = a * a.adjoint();
  return DensityMatrix(std::move(rho));
}

DensityMatrix mixed_density(std::span<const std::pair<double, StateVector>> parts) {
  if (parts.empty()) throw DomainError("mixed_density: no components");
  const std::size_t dim = parts.front().second.dim();
  double total = 0.0;
  for (const auto& [p, psi] : parts) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("mixed_density: negative probability");
    if (psi.dim() != dim) throw DomainError("mixed_density: dimension mismatch");
    total += p;
  }
  if (std::abs(total - 1.0) > kTolerance)
    throw DomainError("mixed_density: probabilities sum to " + std::to_string(total));

  const auto d = static_cast<Eigen::Index>(dim);
  CMatrix rho = CMatrix::Zero(d, d);
  for (const auto& [p, psi] : parts) rho += p * psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(std::move(rho));
}

double trace_expectation(const DensityMatrix& rho, const Observable& obs) {
  if (rho.dim() != obs.dim()) throw DomainError("trace_expectation: dimension mismatch");
  const cplx value = (rho.matrix() * obs.matrix()).trace();
  if (std::abs(value.imag()) >= kTolerance)
    throw DomainError("trace_expectation: non-real result " + std::to_string(value.imag()));
  return value.real();
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.n_qubits();
  validate_positions(keep, n, "partial_trace");
  if (keep.empty()) throw DomainError("partial_trace: must keep at least one qubit");

  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

  const std::size_t k = keep.size();
  const std::size_t kd = std::size_t{1} << k;
  const std::size_t td = std::size_t{1} << traced.size();

  auto scatter = [n](std::size_t bits, std::span<const int> qubits) {
    std::uint64_t index = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j)
      if ((bits >> (qubits.size() - 1 - j)) & 1U)
        index |= std::uint64_t{1} << qubit_shift(n, qubits[j]);
    return static_cast<Eigen::Index>(index);
  };

  std::vector<Eigen::Index> keep_index(kd), traced_index(td);
  for (std::size_t s = 0; s < kd; ++s) keep_index[s] = scatter(s, keep);
  for (std::size_t t = 0; t < td; ++t) traced_index[t] = scatter(t, traced);

  const auto kdim = static_cast<Eigen::Index>(kd);
  CMatrix out = CMatrix::Zero(kdim, kdim);
  for (std::size_t r = 0; r < kd; ++r)
    for (std::size_t c = 0; c < kd; ++c) {
      cplx acc = 0.0;
      for (std::size_t t = 0; t < td; ++t)
        acc += rho.matrix()(keep_index[r] | traced_index[t], keep_index[c] | traced_index[t]);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  return DensityMatrix(std::move(out));
}

}  // namespace qmlkit
