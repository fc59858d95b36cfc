#include "qmlkit/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qmlkit {
namespace {

int checked_qubit_count(Eigen::Index size) {
  if (size < 2 || !is_power_of_two(static_cast<std::uint64_t>(size)))
    throw DomainError("state dimension must be a power of two >= 2, got " + std::to_string(size));
  const int n = log2_exact(static_cast<std::uint64_t>(size));
  if (n > kMaxQubits)
    throw ConfigError("state has " + std::to_string(n) + " qubits, cap is " +
                      std::to_string(kMaxQubits));
  return n;
}

std::uint64_t gather_bits(std::uint64_t index, int n, std::span<const int> qubits) {
  std::uint64_t out = 0;
  for (int q : qubits) out = (out << 1) | ((index >> qubit_shift(n, q)) & 1U);
  return out;
}

}  // namespace

StateVector::StateVector(CVector amplitudes) : n_qubits_(checked_qubit_count(amplitudes.size())) {
  const double norm2 = amplitudes.squaredNorm();
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kTolerance)
    throw DomainError("state is not normalized: sum |c_i|^2 = " + std::to_string(norm2));
  amps_ = std::move(amplitudes);
}

StateVector StateVector::normalize(CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("cannot normalize a zero vector");
  amplitudes /= norm;
  return StateVector(std::move(amplitudes));
}

Observable::Observable(CMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols())
    throw DomainError("observable must be a non-empty square matrix");
  const double residual = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (residual >= kTolerance)
    throw DomainError("observable is not Hermitian (max |M - M^dagger| = " +
                      std::to_string(residual) + ")");
}

Observable::Spectrum Observable::spectrum() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::string PartialMeasurement::bitstring() const {
  std::string s;
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

StateVector basis_state(int n_qubits, std::uint64_t index) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw ConfigError("basis_state: qubit count " + std::to_string(n_qubits) + " out of range");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  if (index >= dim)
    throw DomainError("basis_state: index " + std::to_string(index) + " out of range for " +
                      std::to_string(n_qubits) + " qubits");
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(dim));
  amps[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(amps));
}

cplx inner_product(const StateVector& bra, const StateVector& ket) {
  if (bra.dim() != ket.dim()) throw DomainError("inner_product: dimension mismatch");
  return bra.amplitudes().dot(ket.amplitudes());  // Eigen conjugates the left operand
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() + b.n_qubits() > kMaxQubits) throw ConfigError("tensor: qubit cap exceeded");
  const Eigen::Index db = static_cast<Eigen::Index>(b.dim());
  CVector out(static_cast<Eigen::Index>(a.dim()) * db);
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
    out.segment(i * db, db) = a.amplitudes()[i] * b.amplitudes();
  return StateVector(std::move(out));
}

double expectation(const Observable& obs, const StateVector& psi) {
  if (obs.dim() != psi.dim()) throw DomainError("expectation: dimension mismatch");
  const cplx value = psi.amplitudes().dot(obs.matrix() * psi.amplitudes());
  if (std::abs(value.imag()) >= kTolerance)
    throw DomainError("expectation: non-real result " + std::to_string(value.imag()));
  return value.real();
}

double variance(const Observable& obs, const StateVector& psi) {
  const double mean = expectation(obs, psi);
  const Eigen::Index d = static_cast<Eigen::Index>(obs.dim());
  const CMatrix shifted = obs.matrix() - mean * CMatrix::Identity(d, d);
  const CVector v = shifted * psi.amplitudes();
  // <psi|(O - <O>)^2|psi> = || (O - <O>) psi ||^2 for Hermitian O.
  return v.squaredNorm();
}

std::size_t sample_index(std::span<const double> probabilities, RngStream& rng) {
  const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    acc += probabilities[i];
    last_nonzero = i;
    if (u < acc) return i;
  }
  return last_nonzero;
}

MeasurementOutcome measure_all(const StateVector& psi, RngStream& rng) {
  std::vector<double> probs(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) probs[i] = psi.probability(i);
  const std::size_t idx = sample_index(probs, rng);
  return {idx, basis_state(psi.n_qubits(), idx), probs[idx]};
}

void validate_positions(std::span<const int> positions, int n_qubits, const char* what) {
  std::vector<int> sorted(positions.begin(), positions.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError(std::string(what) + ": qubit positions must be distinct");
  for (int q : sorted)
    if (q < 0 || q >= n_qubits)
      throw DomainError(std::string(what) + ": qubit position " + std::to_string(q) +
                        " out of range for " + std::to_string(n_qubits) + " qubits");
}

std::vector<double> marginal_distribution(const StateVector& psi, std::span<const int> qubits) {
  validate_positions(qubits, psi.n_qubits(), "marginal_distribution");
  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  for (std::size_t i = 0; i < psi.dim(); ++i)
    probs[gather_bits(i, psi.n_qubits(), qubits)] += psi.probability(i);
  return probs;
}

PartialMeasurement measure_subset(const StateVector& psi, std::span<const int> qubits,
                                  RngStream& rng) {
  if (qubits.empty()) throw DomainError("measure_subset: no qubits requested");
  const auto probs = marginal_distribution(psi, qubits);
  const std::uint64_t outcome = sample_index(probs, rng);
  const int n = psi.n_qubits();

  CVector collapsed = CVector::Zero(static_cast<Eigen::Index>(psi.dim()));
  for (std::size_t i = 0; i < psi.dim(); ++i)
    if (gather_bits(i, n, qubits) == outcome) collapsed[static_cast<Eigen::Index>(i)] = psi[i];

  std::vector<int> bits(qubits.size());
  for (std::size_t j = 0; j < qubits.size(); ++j)
    bits[j] = static_cast<int>((outcome >> (qubits.size() - 1 - j)) & 1U);
  return {std::move(bits), StateVector::normalize(std::move(collapsed)), probs[outcome]};
}

bool is_product_two_subsystems(const StateVector& psi, int split) {
  const int n = psi.n_qubits();
  if (split < 1 || split >= n)
    throw DomainError("is_product_two_subsystems: split must be in [1, n_qubits)");
  const Eigen::Index rows = Eigen::Index{1} << split;
  const Eigen::Index cols = Eigen::Index{1} << (n - split);
  CMatrix reshaped(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) reshaped(r, c) = psi.amplitudes()[r * cols + c];
  Eigen::JacobiSVD<CMatrix> svd(reshaped);
  const RVector& s = svd.singularValues();
  return s.size() < 2 || s[1] / s[0] < 1e-9;
}

}  // namespace qmlkit
