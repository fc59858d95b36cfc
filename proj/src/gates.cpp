#include "qmlkit/gates.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace qmlkit {

GateMatrix::GateMatrix(CMatrix matrix) : GateMatrix(std::move(matrix), Trusted{}) {
  const Eigen::Index d = matrix_.rows();
  const double residual =
      (matrix_ * matrix_.adjoint() - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(residual < kTolerance))
    throw DomainError("gate is not unitary (max |U U^dagger - I| = " + std::to_string(residual) +
                      ")");
}

GateMatrix::GateMatrix(CMatrix matrix, Trusted) : matrix_(std::move(matrix)) {
  if (matrix_.rows() < 2 || matrix_.rows() != matrix_.cols() ||
      !is_power_of_two(static_cast<std::uint64_t>(matrix_.rows())))
    throw DomainError("gate must be square with power-of-two dimension >= 2");
  n_qubits_ = log2_exact(static_cast<std::uint64_t>(matrix_.rows()));
  if (n_qubits_ > kMaxQubits) throw ConfigError("gate exceeds qubit cap");
}

GateMatrix GateMatrix::adjoint() const { return GateMatrix(matrix_.adjoint(), Trusted{}); }

GateMatrix operator*(const GateMatrix& a, const GateMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("gate product: dimension mismatch");
  return GateMatrix(a.matrix_ * b.matrix_);
}

GateKind parse_gate_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "X" || upper == "NOT") return GateKind::X;
  if (upper == "Y") return GateKind::Y;
  if (upper == "Z") return GateKind::Z;
  if (upper == "I") return GateKind::I;
  if (upper == "H") return GateKind::H;
  if (upper == "SWAP") return GateKind::Swap;
  if (upper == "R") return GateKind::Phase;
  throw DomainError("unknown gate '" + std::string(name) + "'");
}

std::string gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::I: return "I";
    case GateKind::H: return "H";
    case GateKind::Swap: return "SWAP";
    case GateKind::Phase: return "R";
  }
  return "?";
}

GateMatrix standard_gate(GateKind kind, std::optional<double> phase) {
  const cplx i1(0.0, 1.0);
  CMatrix m;
  switch (kind) {
    case GateKind::X: m = CMatrix{{0, 1}, {1, 0}}; break;
    case GateKind::Y: m = CMatrix{{0, -i1}, {i1, 0}}; break;
    case GateKind::Z: m = CMatrix{{1, 0}, {0, -1}}; break;
    case GateKind::I: m = CMatrix::Identity(2, 2); break;
    case GateKind::H: m = CMatrix{{1, 1}, {1, -1}} / std::numbers::sqrt2; break;
    case GateKind::Swap:
      m = CMatrix::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
      break;
    case GateKind::Phase:
      if (!phase) throw DomainError("gate R requires a phase");
      m = CMatrix{{1, 0}, {0, std::polar(1.0, *phase)}};
      break;
  }
  return GateMatrix(std::move(m));
}

GateMatrix standard_gate(std::string_view name, std::optional<double> phase) {
  return standard_gate(parse_gate_kind(name), phase);
}

GateMatrix kron(std::span<const GateMatrix> gates) {
  if (gates.empty()) throw DomainError("kron: empty gate list");
  CMatrix acc = gates.front().matrix();
  for (std::size_t g = 1; g < gates.size(); ++g) {
    const CMatrix& b = gates[g].matrix();
    CMatrix next(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (Eigen::Index i = 0; i < acc.rows(); ++i)
      for (Eigen::Index j = 0; j < acc.cols(); ++j)
        next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
    acc = std::move(next);
  }
  return GateMatrix(std::move(acc));
}

GateMatrix kron(std::initializer_list<GateMatrix> gates) {
  return kron(std::span<const GateMatrix>(gates.begin(), gates.size()));
}

GateMatrix controlled(const GateMatrix& u) {
  const Eigen::Index d = static_cast<Eigen::Index>(u.dim());
  CMatrix m = CMatrix::Zero(2 * d, 2 * d);
  m.topLeftCorner(d, d) = CMatrix::Identity(d, d);
  m.bottomRightCorner(d, d) = u.matrix();
  return GateMatrix(std::move(m));
}

GateMatrix power_of_two(const GateMatrix& u, int exponent) {
  if (exponent < 0) throw DomainError("power_of_two: negative exponent");
  CMatrix m = u.matrix();
  for (int j = 0; j < exponent; ++j) m = (m * m).eval();
  return GateMatrix(std::move(m), GateMatrix::Trusted{});
}

namespace detail {

void apply_matrix(const CMatrix& gate, std::span<const int> targets, int n_qubits,
                  CVector& amplitudes) {
  const std::size_t k = targets.size();
  const std::size_t sub = std::size_t{1} << k;
  // offsets[s] is the basis-index contribution of gate sub-index s.
  std::vector<std::uint64_t> offsets(sub, 0);
  std::uint64_t target_mask = 0;
  for (std::size_t s = 0; s < sub; ++s)
    for (std::size_t j = 0; j < k; ++j)
      if ((s >> (k - 1 - j)) & 1U) offsets[s] |= std::uint64_t{1} << qubit_shift(n_qubits, targets[j]);
  for (int t : targets) target_mask |= std::uint64_t{1} << qubit_shift(n_qubits, t);

  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  std::vector<cplx> in(sub);
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & target_mask) continue;
    for (std::size_t s = 0; s < sub; ++s) in[s] = amplitudes[static_cast<Eigen::Index>(base | offsets[s])];
    for (std::size_t r = 0; r < sub; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < sub; ++c)
        acc += gate(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      amplitudes[static_cast<Eigen::Index>(base | offsets[r])] = acc;
    }
  }
}

}  // namespace detail

StateVector apply(const GateMatrix& gate, std::span<const int> targets, const StateVector& psi) {
  validate_positions(targets, psi.n_qubits(), "apply");
  if (gate.dim() != (std::size_t{1} << targets.size()))
    throw DomainError("apply: gate acts on " + std::to_string(gate.n_qubits()) + " qubits but " +
                      std::to_string(targets.size()) + " targets given");
  CVector amps = psi.amplitudes();
  detail::apply_matrix(gate.matrix(), targets, psi.n_qubits(), amps);
  return StateVector(std::move(amps));
}

StateVector apply(const GateMatrix& gate, std::initializer_list<int> targets,
                  const StateVector& psi) {
  return apply(gate, std::span<const int>(targets.begin(), targets.size()), psi);
}

GateMatrix function_oracle(const std::function<std::uint64_t(std::uint64_t)>& f, int n_in,
                           int m_out) {
  if (n_in < 1 || m_out < 1) throw DomainError("function_oracle: need at least one input and output bit");
  if (n_in + m_out > 12) throw ConfigError("function_oracle: dense oracle limited to 12 qubits");
  const std::uint64_t out_dim = std::uint64_t{1} << m_out;
  const Eigen::Index dim = Eigen::Index{1} << (n_in + m_out);
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n_in); ++x) {
    const std::uint64_t fx = f(x);
    if (fx >= out_dim)
      throw DomainError("function_oracle: f(" + std::to_string(x) + ") = " + std::to_string(fx) +
                        " does not fit in " + std::to_string(m_out) + " output bits");
    for (std::uint64_t y = 0; y < out_dim; ++y) {
      const auto col = static_cast<Eigen::Index>((x << m_out) | y);
      const auto row = static_cast<Eigen::Index>((x << m_out) | (y ^ fx));
      m(row, col) = 1.0;
    }
  }
  return GateMatrix(std::move(m));
}

}  // namespace qmlkit
