#include "qmlkit/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qmlkit {

SignOracle threshold_oracle(const ObjectiveFn& f, double y) {
  return {f.n_bits, [eval = f.eval, y](std::uint64_t x) { return eval(x) < y; }, std::nullopt};
}

std::string to_bitstring(std::uint64_t x, int n_bits) {
  std::string s(static_cast<std::size_t>(n_bits), '0');
  for (int b = 0; b < n_bits; ++b)
    if ((x >> (n_bits - 1 - b)) & 1U) s[static_cast<std::size_t>(b)] = '1';
  return s;
}

std::uint64_t from_bitstring(std::string_view bits) {
  if (bits.empty() || bits.size() > 63) throw DomainError("bitstring length out of range");
  std::uint64_t x = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw DomainError("bitstring '" + std::string(bits) + "' is not binary");
    x = (x << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return x;
}

MinimizeResult minimize(const ObjectiveFn& f, RngStream& rng, const MinimizeConfig& cfg) {
  const int n = f.n_bits;
  if (n < 1 || n > kMinimizerMaxBits)
    throw ConfigError("minimize: bit count " + std::to_string(n) + " outside [1, " +
                      std::to_string(kMinimizerMaxBits) + "]");
  if (!(cfg.growth > 1.0)) throw ConfigError("minimize: growth must exceed 1");

  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> values(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    values[x] = f.eval(x);
    if (std::isnan(values[x])) throw DomainError("minimize: objective returned NaN at x=" + to_bitstring(x, n));
  }

  const bool ties = cfg.prefer_lower_index_on_ties;
  auto below = [&](std::uint64_t a, std::uint64_t b) {
    return values[a] < values[b] || (ties && values[a] == values[b] && a < b);
  };

  const bool closed_form = cfg.backend == GroverBackend::ClosedForm ||
                           (cfg.backend == GroverBackend::Auto && n > kDenseOracleMaxBits);
  // Inputs ordered by (f, x); every threshold set is a prefix of this order.
  std::vector<std::uint64_t> order;
  if (closed_form) {
    order.resize(dim);
    std::iota(order.begin(), order.end(), std::uint64_t{0});
    std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
      return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
  }
  auto marked_prefix = [&](std::uint64_t threshold) {
    return static_cast<std::size_t>(
        std::partition_point(order.begin(), order.end(),
                             [&](std::uint64_t x) { return below(x, threshold); }) -
        order.begin());
  };

  const double sqrt_n = std::sqrt(static_cast<double>(dim));
  const int budget = cfg.max_main_iterations
                         ? *cfg.max_main_iterations
                         : static_cast<int>(std::ceil(cfg.budget_factor * sqrt_n));
  if (budget < 0) throw ConfigError("minimize: negative iteration budget");
  const auto oracle_budget = static_cast<std::int64_t>(std::ceil(cfg.oracle_budget_factor * sqrt_n));

  std::uint64_t best = rng.uniform_index(dim);
  MinimizeResult result{best, {}, values[best], 0, 0, {}};
  double m = 1.0;
  std::vector<std::uint8_t> mask(closed_form ? 0 : dim);

  for (int it = 0; it < budget && result.oracle_calls < oracle_budget; ++it) {
    const auto rounds = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(std::ceil(m))));
    std::uint64_t candidate;
    if (closed_form) {
      const std::size_t k = marked_prefix(best);
      const double theta = std::asin(std::sqrt(static_cast<double>(k) / static_cast<double>(dim)));
      const double p_marked = std::pow(std::sin((2.0 * rounds + 1.0) * theta), 2);
      const bool hit = k == dim || (k > 0 && rng.uniform() < p_marked);
      candidate = hit ? order[rng.uniform_index(k)] : order[k + rng.uniform_index(dim - k)];
    } else {
      for (std::uint64_t x = 0; x < dim; ++x) mask[x] = below(x, best) ? 1 : 0;
      candidate = grover_search(n, mask, rounds, rng).measured_index;
    }
    result.oracle_calls += rounds;

    const bool accepted = below(candidate, best);
    result.trace.push_back({values[best], best, candidate, values[candidate], rounds, accepted});
    if (accepted) {
      best = candidate;
      m = 1.0;
    } else {
      m = std::min(std::ceil(cfg.growth * m), sqrt_n);
    }
    ++result.main_iterations;
  }

  result.argmin = best;
  result.argmin_bits = to_bitstring(best, n);
  result.min_value = values[best];
  return result;
}

std::size_t grover_argmin(std::span<const double> values, RngStream& rng,
                          const MinimizeConfig& cfg) {
  if (values.empty()) throw DomainError("grover_argmin: empty value list");
  if (values.size() == 1) return 0;
  const int n = std::max(1, log2_exact(values.size()));
  MinimizeConfig local = cfg;
  local.prefer_lower_index_on_ties = true;
  const ObjectiveFn f{n, [values](std::uint64_t x) {
                        return x < values.size() ? values[x]
                                                 : std::numeric_limits<double>::infinity();
                      }};
  return static_cast<std::size_t>(minimize(f, rng, local).argmin);
}

}  // namespace qmlkit
