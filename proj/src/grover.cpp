#include "qmlkit/grover.hpp"

#include <cmath>
#include <numbers>

namespace qmlkit {
namespace {

void check_bits(int n_bits, int cap, const char* what) {
  if (n_bits < 1 || n_bits > cap)
    throw ConfigError(std::string(what) + ": bit count " + std::to_string(n_bits) +
                      " outside [1, " + std::to_string(cap) + "]");
}

}  // namespace

std::vector<std::uint8_t> SignOracle::mask() const {
  check_bits(n_bits, kMaxQubits, "oracle");
  std::vector<std::uint8_t> m(std::size_t{1} << n_bits);
  for (std::uint64_t x = 0; x < m.size(); ++x) m[x] = predicate(x) ? 1 : 0;
  return m;
}

GateMatrix oracle_gate(const SignOracle& oracle) {
  check_bits(oracle.n_bits, kDenseOracleMaxBits, "oracle_gate");
  const auto m = oracle.mask();
  const auto dim = static_cast<Eigen::Index>(m.size());
  CMatrix g = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) g(i, i) = m[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
  return GateMatrix(std::move(g));
}

GateMatrix diffusion(int n_bits) {
  check_bits(n_bits, kDenseOracleMaxBits, "diffusion");
  const Eigen::Index dim = Eigen::Index{1} << n_bits;
  CMatrix g = CMatrix::Constant(dim, dim, 2.0 / static_cast<double>(dim));
  g.diagonal().array() -= 1.0;
  return GateMatrix(std::move(g));
}

int default_iterations(int n_bits, std::uint64_t marked_count) {
  const double k = static_cast<double>(std::max<std::uint64_t>(marked_count, 1));
  const double n = std::ldexp(1.0, n_bits);
  return static_cast<int>(std::floor(std::numbers::pi / 4.0 * std::sqrt(n / k)));
}

StateVector grover_state(int n_bits, std::span<const std::uint8_t> marked, int iterations) {
  check_bits(n_bits, kMaxQubits, "grover");
  const std::size_t dim = std::size_t{1} << n_bits;
  if (marked.size() != dim) throw DomainError("grover: mark vector length must be 2^n");
  if (iterations < 0) throw DomainError("grover: negative iteration count");

  // Every operator involved is real, so the evolution stays in R^N.
  RVector a = RVector::Constant(static_cast<Eigen::Index>(dim), 1.0 / std::sqrt(double(dim)));
  for (int r = 0; r < iterations; ++r) {
    for (std::size_t i = 0; i < dim; ++i)
      if (marked[i]) a[static_cast<Eigen::Index>(i)] = -a[static_cast<Eigen::Index>(i)];
    const double two_mean = 2.0 * a.mean();
    a = (two_mean - a.array()).matrix();
  }
  return StateVector(a.cast<cplx>());
}

GroverResult grover_search(int n_bits, std::span<const std::uint8_t> marked, int iterations,
                           RngStream& rng) {
  StateVector final_state = grover_state(n_bits, marked, iterations);
  double success = 0.0;
  for (std::size_t i = 0; i < final_state.dim(); ++i)
    if (marked[i]) success += final_state.probability(i);
  const auto outcome = measure_all(final_state, rng);
  return {outcome.basis_index, iterations, std::move(final_state), success};
}

GroverResult grover_search(const SignOracle& oracle, std::optional<int> iterations,
                           RngStream& rng) {
  const auto m = oracle.mask();
  const int r = iterations ? *iterations
                           : default_iterations(oracle.n_bits, oracle.marked_count_hint.value_or(1));
  return grover_search(oracle.n_bits, m, r, rng);
}

}  // namespace qmlkit
