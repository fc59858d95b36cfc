#include "qmlkit/qnn.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qmlkit {
namespace {

void check_params(const RVector& alphas, const QnnEncoding& enc) {
  enc.validate();
  if (static_cast<std::size_t>(alphas.size()) != enc.n_params())
    throw DomainError("qnn: expected " + std::to_string(enc.n_params()) + " parameters, got " +
                      std::to_string(alphas.size()));
}

void check_example(const QnnExample& ex, const QnnEncoding& enc) {
  const std::uint64_t feature_limit = std::uint64_t{1} << enc.k;
  if (ex.x1 >= feature_limit || ex.x2 >= feature_limit)
    throw DomainError("qnn: feature value does not fit in " + std::to_string(enc.k) + " bits");
  if (ex.y >= (std::uint64_t{1} << enc.m))
    throw DomainError("qnn: label " + std::to_string(ex.y) + " does not fit in " +
                      std::to_string(enc.m) + " bits");
}

/// Tr(rho sigma_i) on label qubit q of an m-qubit density, i = 1 (X), 2 (Y), 3 (Z).
double label_pauli(const CMatrix& rho, int m, int q, int i) {
  const int shift = m - 1 - q;
  cplx acc = 0.0;
  for (Eigen::Index c = 0; c < rho.cols(); ++c) {
    const bool bit = (c >> shift) & 1;
    const Eigen::Index flipped = c ^ (Eigen::Index{1} << shift);
    switch (i) {
      case 1: acc += rho(c, flipped); break;
      case 2: acc += rho(c, flipped) * (bit ? cplx(0, -1) : cplx(0, 1)); break;
      default: acc += rho(c, c) * (bit ? -1.0 : 1.0); break;
    }
  }
  return acc.real();
}

}  // namespace

void QnnEncoding::validate() const {
  if (k < 1 || m < 1) throw ConfigError("qnn: k and m must be >= 1");
  if (n_total() > kQnnMaxQubits)
    throw ConfigError("qnn: 2k + m = " + std::to_string(n_total()) + " exceeds " +
                      std::to_string(kQnnMaxQubits) + " qubits");
}

StateVector encode_example(std::uint64_t x1, std::uint64_t x2, const QnnEncoding& enc) {
  enc.validate();
  check_example({x1, x2, 0}, enc);
  return basis_state(enc.n_total(), (((x1 << enc.k) | x2) << enc.m));
}

CMatrix pauli_word(std::uint64_t word, int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  CMatrix p = CMatrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index row = col;
    cplx amp = 1.0;
    for (int q = 0; q < n_qubits; ++q) {
      const auto sigma = static_cast<int>((word >> (2 * (n_qubits - 1 - q))) & 3U);
      const int shift = qubit_shift(n_qubits, q);
      const bool bit = (col >> shift) & 1;
      switch (sigma) {
        case 1: row ^= Eigen::Index{1} << shift; break;
        case 2:
          row ^= Eigen::Index{1} << shift;
          amp *= bit ? cplx(0, -1) : cplx(0, 1);
          break;
        case 3:
          if (bit) amp = -amp;
          break;
        default: break;
      }
    }
    p(row, col) = amp;
  }
  return p;
}

CMatrix qnn_generator(const RVector& alphas, int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (Eigen::Index w = 0; w < alphas.size(); ++w)
    if (alphas[w] != 0.0) h += alphas[w] * pauli_word(static_cast<std::uint64_t>(w), n_qubits);
  return 0.5 * (h + h.adjoint());
}

GateMatrix build_unitary(const RVector& alphas, const QnnEncoding& enc) {
  check_params(alphas, enc);
  if (!alphas.allFinite()) throw DomainError("qnn: non-finite parameter");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(qnn_generator(alphas, enc.n_total()));
  const CVector phases = (solver.eigenvalues().cast<cplx>() * cplx(0.0, 1.0)).array().exp().matrix();
  CMatrix u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  return GateMatrix(std::move(u));
}

DensityMatrix forward(const GateMatrix& u, const QnnEncoding& enc, std::uint64_t x1,
                      std::uint64_t x2) {
  const StateVector in = encode_example(x1, x2, enc);
  if (u.dim() != in.dim()) throw DomainError("qnn forward: unitary size mismatch");
  const CVector psi = u.matrix() * in.amplitudes();
  const Eigen::Index label_dim = Eigen::Index{1} << enc.m;
  const Eigen::Index feature_dim = psi.size() / label_dim;
  CMatrix rho = CMatrix::Zero(label_dim, label_dim);
  for (Eigen::Index f = 0; f < feature_dim; ++f) {
    const CVector block = psi.segment(f * label_dim, label_dim);
    rho += block * block.adjoint();
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

DensityMatrix forward(const RVector& alphas, const QnnEncoding& enc, std::uint64_t x1,
                      std::uint64_t x2) {
  return forward(build_unitary(alphas, enc), enc, x1, x2);
}

double cost(const RVector& alphas, const QnnEncoding& enc, const std::vector<QnnExample>& data,
            const QnnTrainConfig& cfg) {
  const GateMatrix u = build_unitary(alphas, enc);
  const bool weighted = cfg.f_weights.size() > 0;
  if (weighted && (cfg.f_weights.rows() != static_cast<Eigen::Index>(data.size()) ||
                   cfg.f_weights.cols() != 3 || (cfg.f_weights.array() < 0.0).any()))
    throw ConfigError("qnn: f_weights must be a non-negative (examples x 3) matrix");

  double total = 0.0;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const QnnExample& ex = data[j];
    check_example(ex, enc);
    const CMatrix rho = forward(u, enc, ex.x1, ex.x2).matrix();
    if (cfg.cost == QnnCost::Overlap) {
      total -= rho(static_cast<Eigen::Index>(ex.y), static_cast<Eigen::Index>(ex.y)).real();
      continue;
    }
    for (int q = 0; q < enc.m; ++q) {
      const bool target_bit = (ex.y >> (enc.m - 1 - q)) & 1U;
      const double target[3] = {0.0, 0.0, target_bit ? -1.0 : 1.0};
      for (int i = 1; i <= 3; ++i) {
        const double f = weighted ? cfg.f_weights(static_cast<Eigen::Index>(j), i - 1) : 1.0;
        const double diff = label_pauli(rho, enc.m, q, i) - target[i - 1];
        total += f * diff * diff;
      }
    }
  }
  return total;
}

RVector gradient(const RVector& alphas, const QnnEncoding& enc,
                 const std::vector<QnnExample>& data, const QnnTrainConfig& cfg) {
  check_params(alphas, enc);
  const double h = cfg.fd_step;
  RVector g(alphas.size());
  RVector probe = alphas;
  for (Eigen::Index w = 0; w < alphas.size(); ++w) {
    probe[w] = alphas[w] + h;
    const double up = cost(probe, enc, data, cfg);
    probe[w] = alphas[w] - h;
    const double down = cost(probe, enc, data, cfg);
    probe[w] = alphas[w];
    g[w] = (up - down) / (2.0 * h);
  }
  return g;
}

RVector gradient_five_point(const RVector& alphas, const QnnEncoding& enc,
                            const std::vector<QnnExample>& data, const QnnTrainConfig& cfg) {
  check_params(alphas, enc);
  const double h = cfg.fd_step;
  RVector g(alphas.size());
  RVector probe = alphas;
  auto at = [&](Eigen::Index w, double offset) {
    probe[w] = alphas[w] + offset;
    const double c = cost(probe, enc, data, cfg);
    probe[w] = alphas[w];
    return c;
  };
  for (Eigen::Index w = 0; w < alphas.size(); ++w)
    g[w] = (-at(w, 2 * h) + 8 * at(w, h) - 8 * at(w, -h) + at(w, -2 * h)) / (12.0 * h);
  return g;
}

RVector initial_parameters(const QnnEncoding& enc, RngStream& rng) {
  enc.validate();
  RVector a(static_cast<Eigen::Index>(enc.n_params()));
  for (Eigen::Index w = 0; w < a.size(); ++w) a[w] = rng.uniform(-0.01, 0.01);
  a[0] = 0.0;
  return a;
}

double label_fidelity(const RVector& alphas, const QnnEncoding& enc, const QnnExample& ex) {
  check_example(ex, enc);
  const CMatrix rho = forward(alphas, enc, ex.x1, ex.x2).matrix();
  return rho(static_cast<Eigen::Index>(ex.y), static_cast<Eigen::Index>(ex.y)).real();
}

QnnTrainResult train(const QnnEncoding& enc, const std::vector<QnnExample>& data,
                     const QnnTrainConfig& cfg, RngStream& rng, std::optional<RVector> init) {
  enc.validate();
  if (data.empty()) throw DomainError("qnn train: empty dataset");
  if (!(cfg.eta > 0.0) || !(cfg.fd_step > 0.0) || cfg.epochs < 0 || cfg.patience < 1)
    throw ConfigError("qnn train: eta, fd_step and patience must be positive");
  for (const auto& ex : data) check_example(ex, enc);

  QnnTrainResult out;
  out.params = init ? std::move(*init) : initial_parameters(enc, rng);
  check_params(out.params, enc);
  double eta = cfg.eta;
  double current = cost(out.params, enc, data, cfg);
  out.trace.push_back(current);

  int rising = 0;
  bool halved = false;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const RVector g = gradient(out.params, enc, data, cfg);
    out.params -= eta * g;
    const double next = cost(out.params, enc, data, cfg);
    if (!std::isfinite(next) || !g.allFinite())
      throw DomainError("qnn train: non-finite cost at epoch " + std::to_string(epoch));
    rising = next > current ? rising + 1 : 0;
    current = next;
    out.trace.push_back(current);
    out.epochs_run = epoch;
    if (rising >= cfg.patience) {
      if (halved) {
        out.stopped_early = true;
        break;
      }
      eta *= 0.5;
      halved = true;
      rising = 0;
    }
  }
  out.final_eta = eta;
  return out;
}

}  // namespace qmlkit
