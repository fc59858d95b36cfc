#include "qmlkit/clustering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "qmlkit/minimizer.hpp"

namespace qmlkit {
namespace {

constexpr std::uint64_t kPointStream = 0;
constexpr std::uint64_t kMedianStream = 1;

std::uint64_t stream_key(std::uint64_t kind, int iteration, std::size_t index) {
  return (kind << 62) ^ (static_cast<std::uint64_t>(iteration) << 32) ^ index;
}

void validate(const RMatrix& data, const ClusterConfig& cfg) {
  if (data.rows() == 0 || data.cols() == 0) throw DomainError("clustering: empty dataset");
  if (cfg.k < 1) throw ConfigError("clustering: k must be >= 1");
  if (cfg.k > data.rows())
    throw DomainError("clustering: k = " + std::to_string(cfg.k) + " exceeds " +
                      std::to_string(data.rows()) + " points");
  if (!(cfg.eta > 0.0)) throw ConfigError("clustering: eta must be positive");
  if (cfg.max_iterations < 1) throw ConfigError("clustering: max_iterations must be >= 1");
  if (!data.allFinite()) throw DomainError("clustering: dataset has non-finite entries");
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    if (data.row(i).squaredNorm() == 0.0)
      throw DomainError("clustering: row " + std::to_string(i + 1) + " is the zero vector");
}

struct Assignment {
  std::vector<int> labels;
  RMatrix dist_sq;  // M x k
  int host_fallbacks = 0;
};

Assignment assign(const RMatrix& data, const RMatrix& centroids, const ClusterConfig& cfg,
                  const RngStream& rng, int iteration) {
  const Eigen::Index m = data.rows();
  const Eigen::Index k = centroids.rows();
  Assignment out{std::vector<int>(static_cast<std::size_t>(m)), RMatrix(m, k), 0};
  std::vector<char> zero_centroid(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) zero_centroid[j] = centroids.row(j).squaredNorm() == 0.0;
  std::atomic<int> fallbacks{0};

  auto work = [&](Eigen::Index i) {
    RngStream prng = rng.split(stream_key(kPointStream, iteration, static_cast<std::size_t>(i)));
    const RVector x = data.row(i).transpose();
    for (Eigen::Index j = 0; j < k; ++j) {
      if (zero_centroid[j]) {
        out.dist_sq(i, j) = (x - centroids.row(j).transpose()).squaredNorm();
        fallbacks.fetch_add(1, std::memory_order_relaxed);
      } else {
        out.dist_sq(i, j) =
            dist_calc(x, centroids.row(j).transpose(), cfg.distance_mode, cfg.shots, prng).dist_sq;
      }
    }
    const RVector row = out.dist_sq.row(i).transpose();
    std::size_t best;
    if (cfg.use_grover_argmin) {
      best = grover_argmin(std::span<const double>(row.data(), static_cast<std::size_t>(k)), prng);
    } else {
      Eigen::Index arg = 0;
      row.minCoeff(&arg);  // first minimum on ties
      best = static_cast<std::size_t>(arg);
    }
    out.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  };

  const int threads = std::clamp(cfg.threads, 1, static_cast<int>(std::max<Eigen::Index>(m, 1)));
  if (threads == 1) {
    for (Eigen::Index i = 0; i < m; ++i) work(i);
  } else {
    std::atomic<Eigen::Index> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (Eigen::Index i = next++; i < m && !failed; i = next++) {
          try {
            work(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  out.host_fallbacks = fallbacks.load();
  return out;
}

/// Moves the point farthest from its centroid into each empty cluster.
void repair_empty(Assignment& a, int k) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int l : a.labels) ++counts[static_cast<std::size_t>(l)];
  for (int j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) continue;
    std::size_t far = a.labels.size();
    double far_d = -1.0;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      const int l = a.labels[i];
      if (counts[static_cast<std::size_t>(l)] < 2) continue;
      const double d = a.dist_sq(static_cast<Eigen::Index>(i), l);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far == a.labels.size()) continue;
    --counts[static_cast<std::size_t>(a.labels[far])];
    a.labels[far] = j;
    ++counts[static_cast<std::size_t>(j)];
  }
}

double objective(const Assignment& a, const std::vector<int>& labels, bool squared) {
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double d = std::max(a.dist_sq(static_cast<Eigen::Index>(i), labels[i]), 0.0);
    total += squared ? d : std::sqrt(d);
  }
  return total;
}

int count_changes(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return static_cast<int>(b.size());
  int n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

RMatrix rows_of(const RMatrix& data, const std::vector<Eigen::Index>& rows) {
  RMatrix out(static_cast<Eigen::Index>(rows.size()), data.cols());
  for (std::size_t j = 0; j < rows.size(); ++j) out.row(static_cast<Eigen::Index>(j)) = data.row(rows[j]);
  return out;
}

}  // namespace

std::vector<Eigen::Index> initial_centroid_rows(const RMatrix& data, int k, RngStream& rng) {
  const auto m = static_cast<std::size_t>(data.rows());
  if (k < 1 || static_cast<std::size_t>(k) > m)
    throw DomainError("initial_centroid_rows: k must be in [1, rows]");
  std::vector<Eigen::Index> idx(m);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
    const std::size_t pick = j + static_cast<std::size_t>(rng.uniform_index(m - j));
    std::swap(idx[j], idx[pick]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

RMatrix cluster_means(const RMatrix& data, const std::vector<int>& assignments, int k) {
  RMatrix sums = RMatrix::Zero(k, data.cols());
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    sums.row(assignments[i]) += data.row(static_cast<Eigen::Index>(i));
    ++counts[static_cast<std::size_t>(assignments[i])];
  }
  for (int j = 0; j < k; ++j)
    if (counts[static_cast<std::size_t>(j)] > 0) sums.row(j) /= counts[static_cast<std::size_t>(j)];
  return sums;
}

ClusterModel kmeans(const RMatrix& data, const ClusterConfig& cfg, RngStream& rng) {
  validate(data, cfg);
  ClusterModel model{cfg.k, rows_of(data, initial_centroid_rows(data, cfg.k, rng)), {}, 0, false, {}, {},
                     {}};
  int fallbacks = 0;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    Assignment a = assign(data, model.centroids, cfg, rng, it);
    repair_empty(a, cfg.k);
    fallbacks += a.host_fallbacks;

    ClusterIteration rec{it, std::nullopt, objective(a, a.labels, true), 0.0,
                         count_changes(model.assignments, a.labels)};
    if (!model.assignments.empty()) rec.objective_before = objective(a, model.assignments, true);

    RMatrix next = cluster_means(data, a.labels, cfg.k);
    for (int j = 0; j < cfg.k; ++j)
      rec.max_shift = std::max(rec.max_shift, (next.row(j) - model.centroids.row(j)).norm());
    model.centroids = std::move(next);
    model.assignments = std::move(a.labels);
    model.iterations = it;
    model.trace.push_back(rec);
    if (rec.max_shift < cfg.eta) {
      model.converged = true;
      break;
    }
  }
  if (fallbacks > 0)
    model.warnings.push_back("zero centroid: " + std::to_string(fallbacks) +
                             " distances computed on the host");
  return model;
}

ClusterModel kmedians(const RMatrix& data, const ClusterConfig& cfg, RngStream& rng) {
  validate(data, cfg);
  std::vector<Eigen::Index> rows = initial_centroid_rows(data, cfg.k, rng);
  ClusterModel model{cfg.k, rows_of(data, rows), {}, 0, false, rows, {}, {}};
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    Assignment a = assign(data, model.centroids, cfg, rng, it);
    repair_empty(a, cfg.k);

    ClusterIteration rec{it, std::nullopt, objective(a, a.labels, false), 0.0,
                         count_changes(model.assignments, a.labels)};
    if (!model.assignments.empty()) rec.objective_before = objective(a, model.assignments, false);

    std::vector<Eigen::Index> next(rows.size());
    for (int j = 0; j < cfg.k; ++j) {
      std::vector<Eigen::Index> members;
      for (std::size_t i = 0; i < a.labels.size(); ++i)
        if (a.labels[i] == j) members.push_back(static_cast<Eigen::Index>(i));
      if (members.empty()) {
        next[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(j)];
        continue;
      }
      RngStream mrng = rng.split(stream_key(kMedianStream, it, static_cast<std::size_t>(j)));
      const MedianResult med = median_calc(rows_of(data, members), cfg.distance_mode, cfg.shots, mrng);
      next[static_cast<std::size_t>(j)] = members[med.index];
    }
    const RMatrix centroids = rows_of(data, next);
    for (int j = 0; j < cfg.k; ++j)
      rec.max_shift = std::max(rec.max_shift, (centroids.row(j) - model.centroids.row(j)).norm());
    const bool unchanged = next == rows;
    rows = std::move(next);
    model.centroids = centroids;
    model.centroid_rows = rows;
    model.assignments = std::move(a.labels);
    model.iterations = it;
    model.trace.push_back(rec);
    if (unchanged) {
      model.converged = true;
      break;
    }
  }
  return model;
}

}  // namespace qmlkit
