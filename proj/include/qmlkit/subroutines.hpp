#pragma once

#include <optional>
#include <vector>

#include "qmlkit/state.hpp"

namespace qmlkit {

/// Amplitude encoding of a real vector, zero-padded to a power of two
/// (at least two entries).
struct EncodedVector {
  RVector raw;
  double norm;
  StateVector state;

  RVector reconstruct() const;
};

struct OverlapEstimate {
  double p0_hat;
  /// 2 * p0_hat - 1 clamped to [0, 1].
  double overlap_sq_hat;
  int shots;
  double exact_p0;
};

struct DistanceEstimate {
  /// |a|^2 + |b|^2
  double z;
  double dist_sq;
  double inner_prod;
  OverlapEstimate overlap;
};

enum class EstimateMode { Exact, Shots };

inline constexpr int kDefaultShots = 4096;

EncodedVector encode(const RVector& a);

/// Qubits used by the amplitude encoding of an N-dimensional vector.
int encoding_qubits(Eigen::Index n);

/// Control H, controlled SWAP of the registers, H, then `shots` control
/// measurements. exact_p0 is read from the final state.
OverlapEstimate swap_test(const StateVector& a, const StateVector& b, int shots, RngStream& rng);

/// |a - b|^2 from a swap test between phi = (|a||0> - |b||1>)/sqrt(Z) and the
/// ancilla qubit of psi = (|0,a> + |1,b>)/sqrt(2). Exact mode uses exact_p0.
DistanceEstimate dist_calc(const RVector& a, const RVector& b, EstimateMode mode, int shots,
                           RngStream& rng);

struct MedianResult {
  std::size_t index;
  RVector point;
  /// S_i = sum_j |a_i - a_j| with distances from dist_calc.
  std::vector<double> sums;
};

/// Point minimizing the summed distance to all others; the argmin is taken
/// with grover_argmin.
MedianResult median_calc(const RMatrix& points, EstimateMode mode, int shots, RngStream& rng);

}  // namespace qmlkit
