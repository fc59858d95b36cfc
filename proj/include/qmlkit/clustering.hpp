#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmlkit/subroutines.hpp"

namespace qmlkit {

struct ClusterConfig {
  int k = 2;
  int max_iterations = 100;
  /// k-means stops once every centroid moves less than eta.
  double eta = 1e-6;
  EstimateMode distance_mode = EstimateMode::Exact;
  int shots = kDefaultShots;
  bool use_grover_argmin = false;
  /// Worker threads for the assignment step; results do not depend on it.
  int threads = 1;
};

struct ClusterIteration {
  int iteration;
  /// Objective of the previous assignment under the current centroids
  /// (absent on the first iteration).
  std::optional<double> objective_before;
  double objective_after;
  /// Largest centroid displacement produced by the update.
  double max_shift;
  int reassigned;
};

struct ClusterModel {
  int k;
  RMatrix centroids;
  std::vector<int> assignments;
  int iterations;
  bool converged;
  /// k-medians only: data row used as each centroid.
  std::vector<Eigen::Index> centroid_rows;
  std::vector<ClusterIteration> trace;
  std::vector<std::string> warnings;
};

/// k distinct rows drawn uniformly (partial Fisher-Yates).
std::vector<Eigen::Index> initial_centroid_rows(const RMatrix& data, int k, RngStream& rng);

/// Row-order sum of the members of each cluster divided by its size.
RMatrix cluster_means(const RMatrix& data, const std::vector<int>& assignments, int k);

/// Lloyd iterations with distances from dist_calc and centroid means.
ClusterModel kmeans(const RMatrix& data, const ClusterConfig& cfg, RngStream& rng);

/// Like kmeans, but each centroid is the median_calc of its cluster;
/// converges when no centroid changes.
ClusterModel kmedians(const RMatrix& data, const ClusterConfig& cfg, RngStream& rng);

}  // namespace qmlkit
