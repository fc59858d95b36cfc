#include "qmlkit/subroutines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmlkit/gates.hpp"
#include "qmlkit/minimizer.hpp"

namespace qmlkit {
namespace {

CMatrix cswap_matrix() { return controlled(standard_gate(GateKind::Swap)).matrix(); }

/// Runs H - CSWAP(pairs) - H on `control` and returns P(control = 0).
double swap_test_p0(CVector amps, int n_qubits, int control,
                    const std::vector<std::pair<int, int>>& pairs) {
  const CMatrix h = standard_gate(GateKind::H).matrix();
  const CMatrix cswap = cswap_matrix();
  const int c[] = {control};
  detail::apply_matrix(h, c, n_qubits, amps);
  for (const auto& [p, q] : pairs) {
    const int t[] = {control, p, q};
    detail::apply_matrix(cswap, t, n_qubits, amps);
  }
  detail::apply_matrix(h, c, n_qubits, amps);
  return std::clamp(marginal_distribution(StateVector::normalize(std::move(amps)), c)[0], 0.0, 1.0);
}

OverlapEstimate sample_overlap(double exact_p0, int shots, RngStream& rng) {
  if (shots < 1) throw DomainError("swap test: shots must be >= 1");
  int zeros = 0;
  for (int s = 0; s < shots; ++s)
    if (rng.uniform() < exact_p0) ++zeros;
  const double p0_hat = static_cast<double>(zeros) / shots;
  return {p0_hat, std::clamp(2.0 * p0_hat - 1.0, 0.0, 1.0), shots, exact_p0};
}

}  // namespace

RVector EncodedVector::reconstruct() const {
  RVector out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) out[i] = norm * state.amplitudes()[i].real();
  return out;
}

int encoding_qubits(Eigen::Index n) {
  if (n < 1) throw DomainError("encoding: empty vector");
  return std::max(1, log2_exact(static_cast<std::uint64_t>(n)));
}

EncodedVector encode(const RVector& a) {
  const int n = encoding_qubits(a.size());
  if (!a.allFinite()) throw DomainError("encode: vector has non-finite entries");
  const double norm = a.norm();
  if (!(norm > 0.0)) throw DomainError("encode: zero vector has no quantum state");
  CVector amps = CVector::Zero(Eigen::Index{1} << n);
  amps.head(a.size()) = (a / norm).cast<cplx>();
  return {a, norm, StateVector::normalize(std::move(amps))};
}

OverlapEstimate swap_test(const StateVector& a, const StateVector& b, int shots, RngStream& rng) {
  if (a.n_qubits() != b.n_qubits()) throw DomainError("swap_test: register sizes differ");
  const int n = a.n_qubits();
  const int total = 2 * n + 1;
  if (total > kMaxQubits) throw ConfigError("swap_test: registers exceed qubit cap");
  CVector amps = tensor(basis_state(1, 0), tensor(a, b)).amplitudes();
  std::vector<std::pair<int, int>> pairs;
  for (int q = 0; q < n; ++q) pairs.emplace_back(1 + q, 1 + n + q);
  const double p0 = swap_test_p0(std::move(amps), total, 0, pairs);
  return sample_overlap(p0, shots, rng);
}

DistanceEstimate dist_calc(const RVector& a, const RVector& b, EstimateMode mode, int shots,
                           RngStream& rng) {
  if (a.size() != b.size()) throw DomainError("dist_calc: dimension mismatch");
  const EncodedVector ea = encode(a);
  const EncodedVector eb = encode(b);
  const double z = ea.norm * ea.norm + eb.norm * eb.norm;

  // psi = (|0,a> + |1,b>)/sqrt(2) on 1 + n qubits.
  CVector psi(2 * static_cast<Eigen::Index>(ea.state.dim()));
  psi << ea.state.amplitudes(), eb.state.amplitudes();
  psi /= std::sqrt(2.0);
  const StateVector psi_state(std::move(psi));
  const StateVector phi(CVector{{cplx(ea.norm / std::sqrt(z)), cplx(-eb.norm / std::sqrt(z))}});

  // Layout: control, phi, psi ancilla, psi data.
  const int total = 2 + psi_state.n_qubits();
  if (total > kMaxQubits) throw ConfigError("dist_calc: vectors exceed qubit cap");
  CVector amps = tensor(basis_state(1, 0), tensor(phi, psi_state)).amplitudes();
  const double p0 = swap_test_p0(std::move(amps), total, 0, {{1, 2}});

  OverlapEstimate overlap = mode == EstimateMode::Exact
                                ? OverlapEstimate{p0, std::clamp(2.0 * p0 - 1.0, 0.0, 1.0), 0, p0}
                                : sample_overlap(p0, shots, rng);
  const double dist_sq = 2.0 * z * overlap.overlap_sq_hat;
  return {z, dist_sq, 0.5 * (z - dist_sq), overlap};
}

MedianResult median_calc(const RMatrix& points, EstimateMode mode, int shots, RngStream& rng) {
  const Eigen::Index m = points.rows();
  if (m == 0) throw DomainError("median_calc: empty point set");
  RMatrix dist = RMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double d2 = dist_calc(points.row(i).transpose(), points.row(j).transpose(), mode,
                                  shots, rng)
                            .dist_sq;
      dist(i, j) = dist(j, i) = std::sqrt(std::max(d2, 0.0));
    }
  std::vector<double> sums(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) sums[static_cast<std::size_t>(i)] = dist.row(i).sum();
  const std::size_t idx = grover_argmin(sums, rng);
  return {idx, points.row(static_cast<Eigen::Index>(idx)).transpose(), std::move(sums)};
}

}  // namespace qmlkit
