#pragma once

#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "qmlkit/density.hpp"
#include "qmlkit/fourier.hpp"
#include "qmlkit/subroutines.hpp"

namespace qmlkit {

struct PcaInput {
  RMatrix raw;
  RVector mean;
  /// Column standard deviations used for scaling (standardize only).
  std::optional<RVector> scale;
  /// Demeaned, optionally standardized, unit-norm rows.
  RMatrix processed;
};

inline constexpr double kDefaultEvolutionTime = std::numbers::pi;
inline constexpr int kDefaultPhaseControls = 8;

struct PcaModel {
  DensityMatrix rho;
  double t;
  int n_control;
  /// Descending.
  RVector eigenvalues;
  /// Orthonormal columns matching `eigenvalues`; first nonzero entry positive.
  RMatrix eigenvectors;
  GateMatrix unitary;
};

struct PcaSample {
  int component_index;
  std::uint64_t register_value;
  double lambda_measured;
  StateVector eigvec;
  int counts;
};

enum class ScoreMode { Exact, SwapTest };

/// Demeans columns, optionally scales them to unit variance, and normalizes
/// every row. A row that vanishes after demeaning is a DomainError.
PcaInput preprocess(const RMatrix& raw, bool standardize);

/// rho = (1/M) sum_i |x_i><x_i| over zero-padded rows.
DensityMatrix build_density(const PcaInput& input);

/// V diag(e^{-i lambda_j t}) V^dagger from the spectrum of rho.
GateMatrix evolution_unitary(const DensityMatrix& rho, double t);

PcaModel build_model(const PcaInput& input, double t = kDefaultEvolutionTime,
                     int n_control = kDefaultPhaseControls);

/// lambda = 2 pi ((1 - a / 2^n) mod 1) / t, inverting the e^{-i lambda t} phase.
double lambda_from_register(std::uint64_t a, int n_control, double t);

/// Draws a component with probability lambda_j, then reads lambda_j from one
/// phase-estimation measurement. Samples are aggregated by
/// (component, register value) in ascending order.
std::vector<PcaSample> eigen_sample(const PcaModel& model, int m_samples, RngStream& rng);

/// Number of eigenvalues above 1e-10.
int numerical_rank(const PcaModel& model);

/// s_ij = <x_i|phi_j> for the leading r components. SwapTest mode estimates
/// |s_ij|^2 with swap_test and takes the sign of the exact overlap.
RMatrix extract_scores(const PcaModel& model, const PcaInput& input, int r_components,
                       ScoreMode mode, int shots, RngStream& rng);

double expectation_feature(const PcaModel& model, int component, const Observable& obs);

}  // namespace qmlkit
