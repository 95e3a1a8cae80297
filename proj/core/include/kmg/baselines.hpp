#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "kmg/point_cloud.hpp"

namespace kmg {

struct LloydResult {
  Assignment assignment;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> history;  // objective after each assignment step
};

/// Alternating nearest-centroid assignment and mean update until the
/// assignment is stable or max_iter is reached. An empty cluster takes the
/// point farthest from its current centroid.
LloydResult lloyd(const PointCloud& cloud, const Eigen::MatrixXd& initial_centroids, int max_iter = 300);

/// k-means++ seeding: d x k centroids drawn from the data. Falls back to a
/// uniform pick among unchosen points when all squared distances vanish.
Eigen::MatrixXd kmeanspp_seed(const PointCloud& cloud, int k, std::mt19937_64& rng);

struct RestartSummary {
  LloydResult best;
  double mean_objective = 0.0;
  int restarts = 0;
};

/// Best of `restarts` k-means++ seeded Lloyd runs.
RestartSummary kmeanspp_restarts(const PointCloud& cloud, int k, int restarts, std::uint64_t seed);

struct BruteForceResult {
  Assignment assignment;
  double objective = 0.0;
  std::uint64_t evaluated = 0;
};

/// Exhaustive search over set partitions (restricted growth strings) with
/// every block of size >= n_min. Labels come out in first-occurrence order.
/// Throws std::length_error when the number of partitions exceeds 1e7.
BruteForceResult brute_force(const PointCloud& cloud, int k, Index n_min = 1);

/// Stirling number of the second kind S(n, k), saturating at UINT64_MAX.
std::uint64_t stirling2(Index n, int k);

}  // namespace kmg
