#include "qmlkit/qsvm.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qmlkit {
namespace {

double require_gamma(const KernelSpec& spec) {
  if (!spec.gamma) throw DomainError("gaussian kernel requires gamma");
  if (!(*spec.gamma > 0.0)) throw DomainError("gaussian kernel gamma must be positive");
  return *spec.gamma;
}

}  // namespace

void LabeledDataset::validate() const {
  if (x.rows() == 0) throw DomainError("labeled dataset is empty");
  if (y.size() != x.rows()) throw DomainError("label count does not match row count");
  if (!x.allFinite()) throw DomainError("labeled dataset has non-finite features");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y[i] != 1.0 && y[i] != -1.0)
      throw DomainError("label of row " + std::to_string(i + 1) + " is not -1 or +1");
}

double kernel_value(const RVector& a, const RVector& b, const KernelSpec& spec) {
  if (spec.kind == KernelKind::Linear) return a.dot(b);
  return std::exp(-require_gamma(spec) * (a - b).squaredNorm());
}

RMatrix kernel_matrix(const RMatrix& x, const KernelSpec& spec) {
  if (spec.kind == KernelKind::Gaussian) require_gamma(spec);
  const Eigen::Index m = x.rows();
  RMatrix k(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j)
      k(i, j) = k(j, i) = kernel_value(x.row(i).transpose(), x.row(j).transpose(), spec);
  return k;
}

double dual_objective(const RVector& alphas, const RVector& y, const RMatrix& kernel) {
  if (alphas.size() != y.size() || kernel.rows() != y.size())
    throw DomainError("dual_objective: size mismatch");
  if ((alphas.array() < 0.0).any()) throw DomainError("dual_objective: negative multiplier");
  const RVector ay = alphas.cwiseProduct(y);
  return 0.5 * ay.dot(kernel * ay) - alphas.sum();
}

RVector decode_alphas(std::uint64_t index, Eigen::Index m, const AlphaGrid& grid) {
  const int bits = grid.bits_per_alpha;
  const std::uint64_t levels_mask = (std::uint64_t{1} << bits) - 1;
  const double step = grid.alpha_max / static_cast<double>(levels_mask);
  RVector a(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const int shift = static_cast<int>((m - 1 - i) * bits);
    a[i] = static_cast<double>((index >> shift) & levels_mask) * step;
  }
  return a;
}

double default_penalty(const RMatrix& kernel) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(kernel, Eigen::EigenvaluesOnly);
  return 10.0 * std::max(1.0, solver.eigenvalues().maxCoeff());
}

SvmSolution solve(const LabeledDataset& data, const KernelSpec& spec, const AlphaGrid& grid,
                  RngStream& rng) {
  data.validate();
  const Eigen::Index m = data.x.rows();
  if ((data.y.array() > 0).all() || (data.y.array() < 0).all())
    throw DomainError("qsvm: both classes must be present");
  if (grid.bits_per_alpha < 1) throw ConfigError("qsvm: bits_per_alpha must be >= 1");
  if (!(grid.alpha_max > 0.0)) throw ConfigError("qsvm: alpha_max must be positive");
  if (m > kSvmMaxPoints)
    throw ConfigError("qsvm: " + std::to_string(m) + " training points, limit is " +
                      std::to_string(kSvmMaxPoints));
  const std::int64_t total_bits = static_cast<std::int64_t>(m) * grid.bits_per_alpha;
  if (total_bits > kSvmMaxGridBits)
    throw ConfigError("qsvm: grid needs " + std::to_string(total_bits) + " bits, limit is " +
                      std::to_string(kSvmMaxGridBits));

  const RMatrix kernel = kernel_matrix(data.x, spec);
  const double penalty = grid.penalty_coeff.value_or(default_penalty(kernel));
  if (!(penalty >= 0.0)) throw ConfigError("qsvm: penalty must be non-negative");

  auto penalized = [&](std::uint64_t index) {
    const RVector a = decode_alphas(index, m, grid);
    const double residual = a.dot(data.y);
    return dual_objective(a, data.y, kernel) + penalty * residual * residual;
  };

  MinimizeConfig mcfg;
  mcfg.prefer_lower_index_on_ties = true;
  const MinimizeResult found =
      minimize(ObjectiveFn{static_cast<int>(total_bits), penalized}, rng, mcfg);

  // Host polish: steepest descent over the 3^M - 1 grid neighbours.
  const std::uint64_t levels = (std::uint64_t{1} << grid.bits_per_alpha) - 1;
  std::uint64_t best = found.argmin;
  double best_value = penalized(best);
  std::vector<int> delta(static_cast<std::size_t>(m));
  for (bool improved = true; improved;) {
    improved = false;
    std::uint64_t round_best = best;
    double round_value = best_value;
    std::fill(delta.begin(), delta.end(), -1);
    while (true) {
      std::uint64_t cand = 0;
      bool valid = true;
      for (Eigen::Index i = 0; i < m && valid; ++i) {
        const int shift = static_cast<int>((m - 1 - i) * grid.bits_per_alpha);
        const auto level = static_cast<std::int64_t>((best >> shift) & levels) + delta[static_cast<std::size_t>(i)];
        valid = level >= 0 && level <= static_cast<std::int64_t>(levels);
        cand |= static_cast<std::uint64_t>(level) << shift;
      }
      if (valid && cand != best) {
        const double v = penalized(cand);
        if (v < round_value || (v == round_value && cand < round_best)) {
          round_value = v;
          round_best = cand;
        }
      }
      std::size_t d = 0;
      while (d < delta.size() && delta[d] == 1) delta[d++] = -1;
      if (d == delta.size()) break;
      ++delta[d];
    }
    if (round_best != best) {
      best = round_best;
      best_value = round_value;
      improved = true;
    }
  }

  SvmSolution sol;
  sol.alphas = decode_alphas(best, m, grid);
  sol.grid_index = best;
  sol.minimizer_index = found.argmin;
  sol.oracle_calls = found.oracle_calls;
  sol.main_iterations = found.main_iterations;
  sol.penalty_coeff = penalty;
  sol.penalized_value = best_value;
  sol.dual_value = dual_objective(sol.alphas, data.y, kernel);
  for (Eigen::Index i = 0; i < m; ++i)
    if (sol.alphas[i] > 0.0) sol.support_indices.push_back(static_cast<std::size_t>(i));

  const RVector ay = sol.alphas.cwiseProduct(data.y);
  if (spec.kind == KernelKind::Linear) sol.theta = data.x.transpose() * ay;
  if (!sol.support_indices.empty()) {
    double acc = 0.0;
    for (std::size_t i : sol.support_indices) {
      const auto ii = static_cast<Eigen::Index>(i);
      acc += kernel.col(ii).dot(ay) - data.y[ii];
    }
    sol.b = acc / static_cast<double>(sol.support_indices.size());
  }
  return sol;
}

int predict(const SvmSolution& model, const LabeledDataset& data, const KernelSpec& spec,
            const RVector& x) {
  if (model.alphas.size() == 0) throw DomainError("predict: model is untrained");
  if (model.alphas.size() != data.x.rows()) throw DomainError("predict: model/data size mismatch");
  if (x.size() != data.x.cols()) throw DomainError("predict: feature dimension mismatch");
  double score = -model.b;
  for (std::size_t i : model.support_indices) {
    const auto ii = static_cast<Eigen::Index>(i);
    score += model.alphas[ii] * data.y[ii] * kernel_value(data.x.row(ii).transpose(), x, spec);
  }
  return score >= 0.0 ? 1 : -1;
}

}  // namespace qmlkit
