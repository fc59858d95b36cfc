#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmlkit/grover.hpp"

namespace qmlkit {

/// Real-valued black box over n-bit inputs.
struct ObjectiveFn {
  int n_bits;
  std::function<double(std::uint64_t)> eval;
};

/// Marks exactly {x : f(x) < y}.
SignOracle threshold_oracle(const ObjectiveFn& f, double y);

enum class GroverBackend {
  Auto,         // state vector up to kDenseOracleMaxBits, closed form above
  StateVector,  // amplitude-by-amplitude simulation
  ClosedForm,   // exact two-dimensional rotation, O(1) per round
};

struct MinimizeConfig {
  /// Main-loop budget; defaults to ceil(budget_factor * sqrt(2^n)).
  std::optional<int> max_main_iterations;
  double budget_factor = 4.5;
  /// The run also stops once the total Grover rounds reach
  /// ceil(oracle_budget_factor * sqrt(2^n)).
  double oracle_budget_factor = 22.5;
  /// Round-range growth on a rejected candidate.
  double growth = 8.0 / 7.0;
  /// Compares (f(x), x) lexicographically so equal values resolve to the
  /// lowest index.
  bool prefer_lower_index_on_ties = false;
  GroverBackend backend = GroverBackend::Auto;
};

struct MinimizeStep {
  double threshold;
  std::uint64_t threshold_index;
  std::uint64_t candidate;
  double candidate_value;
  int rounds;
  bool accepted;
};

struct MinimizeResult {
  std::uint64_t argmin;
  std::string argmin_bits;
  double min_value;
  int main_iterations;
  /// Total Grover rounds (oracle applications) across the run.
  std::int64_t oracle_calls;
  std::vector<MinimizeStep> trace;
};

/// Largest domain accepted by minimize.
inline constexpr int kMinimizerMaxBits = 22;

MinimizeResult minimize(const ObjectiveFn& f, RngStream& rng, const MinimizeConfig& cfg = {});

/// n-character binary string, most significant bit first.
std::string to_bitstring(std::uint64_t x, int n_bits);

/// Parses a binary string into its index.
std::uint64_t from_bitstring(std::string_view bits);

/// Index of the smallest entry found by minimize over ceil(log2 size) bits.
/// Padding slots hold +infinity; equal values resolve to the lowest index.
std::size_t grover_argmin(std::span<const double> values, RngStream& rng,
                          const MinimizeConfig& cfg = {});

}  // namespace qmlkit
