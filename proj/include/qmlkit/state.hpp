#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmlkit/rng.hpp"
#include "qmlkit/types.hpp"

namespace qmlkit {

/// Normalized amplitude vector over n qubits.
///
/// Basis index i corresponds to the bitstring of i read left to right, so
/// |10> is index 2. Construction validates the norm to 1e-9 and never
/// renormalizes; use `StateVector::normalize` to rescale explicitly.
class StateVector {
 public:
  explicit StateVector(CVector amplitudes);

  /// Rescales `amplitudes` to unit norm. Throws DomainError on a zero vector.
  static StateVector normalize(CVector amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }
  double probability(std::size_t i) const { return std::norm((*this)[i]); }

 private:
  int n_qubits_;
  CVector amps_;
};

/// Hermitian matrix acting on a state space.
class Observable {
 public:
  explicit Observable(CMatrix matrix);

  struct Spectrum {
    RVector values;   // ascending
    CMatrix vectors;  // columns are eigenvectors
  };

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }
  Spectrum spectrum() const;

 private:
  CMatrix matrix_;
};

struct MeasurementOutcome {
  std::uint64_t basis_index;
  StateVector collapsed;
  double probability;
};

struct PartialMeasurement {
  std::vector<int> bits;  // one entry per requested qubit, in request order
  StateVector collapsed;
  double probability;

  std::string bitstring() const;
};

StateVector basis_state(int n_qubits, std::uint64_t index);

cplx inner_product(const StateVector& bra, const StateVector& ket);

StateVector tensor(const StateVector& a, const StateVector& b);

double expectation(const Observable& obs, const StateVector& psi);
double variance(const Observable& obs, const StateVector& psi);

MeasurementOutcome measure_all(const StateVector& psi, RngStream& rng);

PartialMeasurement measure_subset(const StateVector& psi, std::span<const int> qubits,
                                  RngStream& rng);

/// Probability of every outcome of the listed qubits; outcome bits are packed
/// with the first listed qubit most significant.
std::vector<double> marginal_distribution(const StateVector& psi, std::span<const int> qubits);

/// Schmidt-rank test: true when the amplitudes reshaped to
/// 2^split x 2^(n-split) have sigma_2 / sigma_1 < 1e-9.
bool is_product_two_subsystems(const StateVector& psi, int split);

/// Draws an index from a discrete distribution by inverse CDF.
std::size_t sample_index(std::span<const double> probabilities, RngStream& rng);

/// Throws DomainError unless positions are distinct and inside [0, n).
void validate_positions(std::span<const int> positions, int n_qubits, const char* what);

}  // namespace qmlkit
