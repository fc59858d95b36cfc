#include "qmlkit/qpca.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qmlkit {
namespace {

constexpr double kRankTolerance = 1e-10;

Eigen::Index padded_dim(Eigen::Index n) {
  return Eigen::Index{1} << encoding_qubits(n);
}

StateVector column_state(const RMatrix& vectors, Eigen::Index j) {
  return StateVector::normalize(vectors.col(j).cast<cplx>());
}

}  // namespace

PcaInput preprocess(const RMatrix& raw, bool standardize) {
  if (raw.rows() < 2) throw DomainError("qpca: need at least two rows");
  if (raw.cols() < 1) throw DomainError("qpca: need at least one column");
  if (!raw.allFinite()) throw DomainError("qpca: data has non-finite entries");
  PcaInput in;
  in.raw = raw;
  in.mean = raw.colwise().mean().transpose();
  in.processed = raw.rowwise() - in.mean.transpose();
  if (standardize) {
    RVector sd = (in.processed.array().square().colwise().sum() / static_cast<double>(raw.rows()))
                     .sqrt()
                     .transpose();
    for (Eigen::Index c = 0; c < sd.size(); ++c)
      if (sd[c] > 0.0) in.processed.col(c) /= sd[c];
    in.scale = std::move(sd);
  }
  for (Eigen::Index i = 0; i < in.processed.rows(); ++i) {
    const double norm = in.processed.row(i).norm();
    if (!(norm > 1e-12))
      throw DomainError("qpca: row " + std::to_string(i + 1) + " is zero after demeaning");
    in.processed.row(i) /= norm;
  }
  return in;
}

DensityMatrix build_density(const PcaInput& input) {
  const RMatrix& x = input.processed;
  const Eigen::Index d = padded_dim(x.cols());
  RMatrix padded = RMatrix::Zero(x.rows(), d);
  padded.leftCols(x.cols()) = x;
  RMatrix rho = padded.transpose() * padded / static_cast<double>(x.rows());
  rho = 0.5 * (rho + rho.transpose()).eval();
  return DensityMatrix(rho.cast<cplx>());
}

GateMatrix evolution_unitary(const DensityMatrix& rho, double t) {
  if (!(t > 0.0)) throw DomainError("evolution_unitary: t must be positive");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix());
  const CVector phases =
      (solver.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
  CMatrix u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  return GateMatrix(std::move(u));
}

PcaModel build_model(const PcaInput& input, double t, int n_control) {
  if (n_control < 1 || n_control > kDenseQftMaxQubits)
    throw ConfigError("qpca: control register width out of range");
  DensityMatrix rho = build_density(input);
  const RMatrix real_rho = rho.matrix().real();
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(real_rho);
  const Eigen::Index d = real_rho.rows();
  RVector values(d);
  RMatrix vectors(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    values[j] = solver.eigenvalues()[d - 1 - j];
    RVector v = solver.eigenvectors().col(d - 1 - j);
    for (Eigen::Index c = 0; c < d; ++c)
      if (std::abs(v[c]) > 1e-12) {
        if (v[c] < 0.0) v = -v;
        break;
      }
    vectors.col(j) = v;
  }
  GateMatrix u = evolution_unitary(rho, t);
  return PcaModel{std::move(rho), t, n_control, std::move(values), std::move(vectors), std::move(u)};
}

double lambda_from_register(std::uint64_t a, int n_control, double t) {
  const double theta = static_cast<double>(a) / std::ldexp(1.0, n_control);
  double phase = 1.0 - theta;
  phase -= std::floor(phase);
  return 2.0 * std::numbers::pi * phase / t;
}

int numerical_rank(const PcaModel& model) {
  return static_cast<int>((model.eigenvalues.array() > kRankTolerance).count());
}

std::vector<PcaSample> eigen_sample(const PcaModel& model, int m_samples, RngStream& rng) {
  if (m_samples < 1) throw DomainError("eigen_sample: need at least one sample");
  const auto d = static_cast<std::size_t>(model.eigenvalues.size());
  std::vector<double> weights(d);
  for (std::size_t j = 0; j < d; ++j)
    weights[j] = std::max(0.0, model.eigenvalues[static_cast<Eigen::Index>(j)]);

  std::vector<std::vector<double>> register_dist(d);
  std::map<std::pair<std::size_t, std::uint64_t>, int> counts;
  for (int s = 0; s < m_samples; ++s) {
    const std::size_t j = sample_index(weights, rng);
    if (register_dist[j].empty())
      register_dist[j] = phase_register_distribution(
          model.unitary, column_state(model.eigenvectors, static_cast<Eigen::Index>(j)),
          model.n_control);
    const std::uint64_t a = sample_index(register_dist[j], rng);
    ++counts[{j, a}];
  }

  std::vector<PcaSample> out;
  for (const auto& [key, n] : counts) {
    const auto j = static_cast<Eigen::Index>(key.first);
    out.push_back({static_cast<int>(key.first), key.second,
                   lambda_from_register(key.second, model.n_control, model.t),
                   column_state(model.eigenvectors, j), n});
  }
  return out;
}

RMatrix extract_scores(const PcaModel& model, const PcaInput& input, int r_components,
                       ScoreMode mode, int shots, RngStream& rng) {
  const int rank = numerical_rank(model);
  if (r_components < 1 || r_components > rank)
    throw DomainError("extract_scores: requested " + std::to_string(r_components) +
                      " components, rank is " + std::to_string(rank));
  const RMatrix& x = input.processed;
  const Eigen::Index d = model.eigenvectors.rows();
  RMatrix padded = RMatrix::Zero(x.rows(), d);
  padded.leftCols(x.cols()) = x;
  RMatrix scores = padded * model.eigenvectors.leftCols(r_components);
  if (mode == ScoreMode::Exact) return scores;

  for (Eigen::Index j = 0; j < r_components; ++j) {
    const StateVector phi = column_state(model.eigenvectors, j);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const StateVector row = StateVector::normalize(padded.row(i).transpose().cast<cplx>());
      const double overlap = swap_test(row, phi, shots, rng).overlap_sq_hat;
      scores(i, j) = (scores(i, j) < 0.0 ? -1.0 : 1.0) * std::sqrt(overlap);
    }
  }
  return scores;
}

double expectation_feature(const PcaModel& model, int component, const Observable& obs) {
  if (component < 0 || component >= model.eigenvalues.size())
    throw DomainError("expectation_feature: component index out of range");
  return expectation(obs, column_state(model.eigenvectors, component));
}

}  // namespace qmlkit
