#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qmlkit/minimizer.hpp"

namespace qmlkit {

/// Feature rows with labels in {-1, +1}.
struct LabeledDataset {
  RMatrix x;
  RVector y;

  /// Throws DomainError unless shapes agree and every label is exactly +-1.
  void validate() const;
};

enum class KernelKind { Linear, Gaussian };

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  /// Gaussian width in exp(-gamma |x - x'|^2).
  std::optional<double> gamma;
};

/// Discretization of the multipliers: alpha = j * alpha_max / (2^bits - 1).
struct AlphaGrid {
  int bits_per_alpha = 2;
  double alpha_max = 4.0;
  /// Weight of (sum_i alpha_i y_i)^2; defaults to 10 * max(1, lambda_max(K)).
  std::optional<double> penalty_coeff;
};

struct SvmSolution {
  RVector alphas;
  /// sum_i alpha_i y_i x_i, linear kernel only.
  std::optional<RVector> theta;
  double b = 0.0;
  /// Dual objective without the penalty term.
  double dual_value = 0.0;
  double penalized_value = 0.0;
  double penalty_coeff = 0.0;
  std::vector<std::size_t> support_indices;
  std::uint64_t grid_index = 0;
  /// Grid index returned by the quantum minimization before polishing.
  std::uint64_t minimizer_index = 0;
  std::int64_t oracle_calls = 0;
  int main_iterations = 0;
};

/// Largest M * bits_per_alpha accepted by solve.
inline constexpr int kSvmMaxGridBits = 20;
/// Largest training set accepted by solve (the polish visits 3^M neighbours).
inline constexpr int kSvmMaxPoints = 12;

RMatrix kernel_matrix(const RMatrix& x, const KernelSpec& spec);
double kernel_value(const RVector& a, const RVector& b, const KernelSpec& spec);

/// 1/2 sum_ij a_i a_j y_i y_j K_ij - sum_i a_i.
double dual_objective(const RVector& alphas, const RVector& y, const RMatrix& kernel);

/// Multipliers for a grid index; alpha 0 occupies the most significant bits.
RVector decode_alphas(std::uint64_t index, Eigen::Index m, const AlphaGrid& grid);

double default_penalty(const RMatrix& kernel);

/// Minimizes the penalized dual over the grid with minimize, then polishes on
/// the host by local search over grid neighbours (each alpha moved by -1, 0 or
/// +1 step) until no neighbour improves.
SvmSolution solve(const LabeledDataset& data, const KernelSpec& spec, const AlphaGrid& grid,
                  RngStream& rng);

/// sign(sum_i alpha_i y_i K(x_i, x) - b), with sign(0) = +1.
int predict(const SvmSolution& model, const LabeledDataset& data, const KernelSpec& spec,
            const RVector& x);

}  // namespace qmlkit
