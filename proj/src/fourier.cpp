#include "qmlkit/fourier.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace qmlkit {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CVector dft_with_sign(const CVector& x, double sign) {
  if (x.size() == 0) throw DomainError("dft: empty input");
  const Eigen::Index n = x.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  CVector y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      // Reduce k*j mod N before scaling to keep the angle small and exact.
      const auto kj = static_cast<double>((k * j) % n);
      acc += x[j] * std::polar(1.0, sign * kTwoPi * kj / static_cast<double>(n));
    }
    y[k] = acc * scale;
  }
  return y;
}

void check_qft_size(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kDenseQftMaxQubits)
    throw ConfigError("qft: qubit count " + std::to_string(n_qubits) + " outside [1, " +
                      std::to_string(kDenseQftMaxQubits) + "]");
}

CMatrix fourier_matrix(int n_qubits, double sign) {
  check_qft_size(n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  CMatrix f(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index k = 0; k < dim; ++k)
      f(j, k) = std::polar(scale, sign * kTwoPi * static_cast<double>((j * k) % dim) /
                                      static_cast<double>(dim));
  return f;
}

}  // namespace

CVector classical_dft(const CVector& x) { return dft_with_sign(x, +1.0); }
CVector inverse_dft(const CVector& y) { return dft_with_sign(y, -1.0); }

GateMatrix qft_gate(int n_qubits) { return GateMatrix(fourier_matrix(n_qubits, +1.0)); }
GateMatrix inverse_qft_gate(int n_qubits) { return GateMatrix(fourier_matrix(n_qubits, -1.0)); }

Circuit qft_circuit(int n_qubits) {
  check_qft_size(n_qubits);
  const int n = n_qubits;
  Circuit c(n);
  for (int p = 0; p < n / 2; ++p) c.add("SWAP", {p, n - 1 - p});
  for (int j = 0; j < n; ++j) {
    const int target = n - 1 - j;
    c.add("H", {target});
    for (int k = j + 1; k < n; ++k)
      c.add("CR", {n - 1 - k, target}, kTwoPi / std::ldexp(1.0, k - j + 1));
  }
  return c;
}

std::vector<double> phase_register_distribution(const GateMatrix& u, const StateVector& eigenvector,
                                                int n_control) {
  if (n_control < 1) throw DomainError("phase_estimate: need at least one control qubit");
  if (u.dim() != eigenvector.dim()) throw DomainError("phase_estimate: unitary and eigenvector dimensions differ");
  const int m = eigenvector.n_qubits();
  const int total = n_control + m;
  if (total > kMaxQubits || n_control > kDenseQftMaxQubits)
    throw ConfigError("phase_estimate: register too large");

  const CVector& phi = eigenvector.amplitudes();
  const cplx lambda = phi.dot(u.matrix() * phi);
  const double residual = (u.matrix() * phi - lambda * phi).norm();
  if (residual > kEigenResidualTolerance)
    throw DomainError("phase_estimate: input is not an eigenvector of U (residual " +
                      std::to_string(residual) + ")");

  CVector amps = tensor(basis_state(n_control, 0), eigenvector).amplitudes();
  const CMatrix h = standard_gate(GateKind::H).matrix();
  for (int p = 0; p < n_control; ++p) {
    const int pos[] = {p};
    detail::apply_matrix(h, pos, total, amps);
  }

  std::vector<int> targets(static_cast<std::size_t>(m) + 1);
  std::iota(targets.begin() + 1, targets.end(), n_control);
  GateMatrix power = u;  // U^(2^0)
  for (int p = n_control - 1; p >= 0; --p) {
    targets[0] = p;
    detail::apply_matrix(controlled(power).matrix(), targets, total, amps);
    if (p > 0) power = power_of_two(power, 1);
  }

  std::vector<int> controls(static_cast<std::size_t>(n_control));
  std::iota(controls.begin(), controls.end(), 0);
  detail::apply_matrix(inverse_qft_gate(n_control).matrix(), controls, total, amps);
  return marginal_distribution(StateVector::normalize(std::move(amps)), controls);
}

PhaseEstimate phase_estimate(const GateMatrix& u, const StateVector& eigenvector, int n_control,
                             RngStream& rng) {
  auto dist = phase_register_distribution(u, eigenvector, n_control);
  const CVector& phi = eigenvector.amplitudes();
  const cplx lambda = phi.dot(u.matrix() * phi);

  const double scale = std::ldexp(1.0, n_control);
  double theta = std::arg(lambda) / kTwoPi;
  theta -= std::floor(theta);
  if (theta >= 1.0) theta = 0.0;
  const double nearest_real = std::round(theta * scale);
  const double delta = theta - nearest_real / scale;
  const auto nearest = static_cast<std::uint64_t>(nearest_real) % (std::uint64_t{1} << n_control);

  const std::uint64_t a = sample_index(dist, rng);
  PhaseEstimate out;
  out.n_control = n_control;
  out.measured_register = a;
  out.theta_estimate = static_cast<double>(a) / scale;
  out.success_probability = dist[nearest];
  out.true_theta = theta;
  out.delta = delta;
  out.nearest_register = nearest;
  out.distribution = std::move(dist);
  return out;
}

double rounding_success_probability(double delta, int n_control) {
  if (n_control < 1) throw DomainError("rounding_success_probability: need n_control >= 1");
  const double scale = std::ldexp(1.0, n_control);
  if (std::abs(scale * delta) > 0.5 + 1e-12)
    throw DomainError("rounding_success_probability: |2^n delta| must not exceed 1/2");
  if (delta == 0.0) return 1.0;
  // |1 - e^{i x}| = 2 |sin(x / 2)|
  const double num = std::sin(std::numbers::pi * scale * delta);
  const double den = std::sin(std::numbers::pi * delta);
  return (num * num) / (den * den) / (scale * scale);
}

}  // namespace qmlkit
