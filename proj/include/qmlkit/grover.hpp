#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qmlkit/gates.hpp"

namespace qmlkit {

/// Black-box predicate over n-bit inputs; O|x> = (-1)^f(x) |x>.
struct SignOracle {
  int n_bits;
  std::function<bool(std::uint64_t)> predicate;
  std::optional<std::uint64_t> marked_count_hint;

  /// Evaluates the predicate on every input: 1 for marked, 0 otherwise.
  std::vector<std::uint8_t> mask() const;
};

struct GroverResult {
  std::uint64_t measured_index;
  int iterations_used;
  StateVector final_state;
  double success_probability;
};

/// Largest register for which oracle and diffusion matrices are materialized.
inline constexpr int kDenseOracleMaxBits = 12;

/// Diagonal gate with -1 at marked inputs. n_bits <= 12.
GateMatrix oracle_gate(const SignOracle& oracle);

/// Inversion around the mean, 2A - I with A_ij = 1/2^n. n_bits <= 12.
GateMatrix diffusion(int n_bits);

/// floor(pi/4 * sqrt(2^n / k)), with k >= 1.
int default_iterations(int n_bits, std::uint64_t marked_count);

/// Uniform superposition followed by `iterations` rounds of sign flip and
/// inversion around the mean, applied directly to the amplitudes.
StateVector grover_state(int n_bits, std::span<const std::uint8_t> marked, int iterations);

/// Runs the search and measures once. Without `iterations`, uses
/// default_iterations with k from the hint, else k = 1.
GroverResult grover_search(const SignOracle& oracle, std::optional<int> iterations,
                           RngStream& rng);

/// Same as grover_search for a precomputed mark vector of length 2^n.
GroverResult grover_search(int n_bits, std::span<const std::uint8_t> marked, int iterations,
                           RngStream& rng);

}  // namespace qmlkit
