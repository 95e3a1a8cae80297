#include "kmg/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "kmg/objective.hpp"

namespace kmg {

LloydResult lloyd(const PointCloud& cloud, const Eigen::MatrixXd& initial_centroids, int max_iter) {
  const Index n = cloud.n();
  const Index k = initial_centroids.cols();
  if (initial_centroids.rows() != cloud.d() || k < 1) throw std::invalid_argument("lloyd: centroid shape");
  if (k > n) throw std::invalid_argument("lloyd: k > n");
  if (!initial_centroids.allFinite()) throw std::invalid_argument("lloyd: non-finite centroids");

  Eigen::MatrixXd c = initial_centroids;
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  LloydResult out;
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    Eigen::VectorXd dist(n);
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double bd = (cloud.point(i) - c.col(0)).squaredNorm();
      for (Index j = 1; j < k; ++j) {
        const double dj = (cloud.point(i) - c.col(j)).squaredNorm();
        if (dj < bd) {
          bd = dj;
          best = j;
        }
      }
      dist(i) = bd;
      if (labels[static_cast<std::size_t>(i)] != best) {
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        changed = true;
      }
    }
    // Empty clusters take the farthest point of a cluster that can spare one.
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    for (Index j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) continue;
      Index far = -1;
      for (Index i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] < 2) continue;
        if (far < 0 || dist(i) > dist(far)) far = i;
      }
      --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
      labels[static_cast<std::size_t>(far)] = static_cast<int>(j);
      counts[static_cast<std::size_t>(j)] = 1;
      dist(far) = 0.0;
      changed = true;
    }
    out.iterations = it + 1;
    const Assignment a(labels, static_cast<int>(k));
    out.history.push_back(kmeans_objective(cloud, a));
    c = centroids(cloud, a);
    if (!changed) break;
  }
  out.assignment = Assignment(labels, static_cast<int>(k));
  out.objective = kmeans_objective(cloud, out.assignment);
  return out;
}

Eigen::MatrixXd kmeanspp_seed(const PointCloud& cloud, int k, std::mt19937_64& rng) {
  const Index n = cloud.n();
  if (k < 1 || k > n) throw std::invalid_argument("kmeanspp_seed: need 1 <= k <= n");
  Eigen::MatrixXd c(cloud.d(), k);
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  std::uniform_int_distribution<Index> uniform(0, n - 1);
  Index first = uniform(rng);
  c.col(0) = cloud.point(first);
  chosen[static_cast<std::size_t>(first)] = 1;
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = (cloud.point(i) - c.col(0)).squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    Index pick = -1;
    if (total > 0.0) {
      std::discrete_distribution<Index> weighted(d2.begin(), d2.end());
      pick = weighted(rng);
    } else {
      std::vector<Index> rest;
      for (Index i = 0; i < n; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) rest.push_back(i);
      }
      std::uniform_int_distribution<std::size_t> u(0, rest.size() - 1);
      pick = rest[u(rng)];
    }
    chosen[static_cast<std::size_t>(pick)] = 1;
    c.col(j) = cloud.point(pick);
    for (Index i = 0; i < n; ++i) {
      d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], (cloud.point(i) - c.col(j)).squaredNorm());
    }
    d2[static_cast<std::size_t>(pick)] = 0.0;
  }
  return c;
}

RestartSummary kmeanspp_restarts(const PointCloud& cloud, int k, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("kmeanspp_restarts: restarts must be >= 1");
  std::mt19937_64 rng(seed);
  RestartSummary out;
  double sum = 0.0;
  for (int r = 0; r < restarts; ++r) {
    LloydResult run = lloyd(cloud, kmeanspp_seed(cloud, k, rng));
    sum += run.objective;
    if (r == 0 || run.objective < out.best.objective) out.best = std::move(run);
  }
  out.restarts = restarts;
  out.mean_objective = sum / restarts;
  return out;
}

std::uint64_t stirling2(Index n, int k) {
  if (k < 0 || n < 0) return 0;
  constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;
  for (Index m = 1; m <= n; ++m) {
    for (int j = std::min<Index>(m, k); j >= 1; --j) {
      const std::uint64_t a = row[static_cast<std::size_t>(j)];
      const std::uint64_t b = row[static_cast<std::size_t>(j) - 1];
      const std::uint64_t prod = a > cap / static_cast<std::uint64_t>(j) ? cap : a * static_cast<std::uint64_t>(j);
      row[static_cast<std::size_t>(j)] = prod > cap - b ? cap : prod + b;
    }
    row[0] = 0;
  }
  return row[static_cast<std::size_t>(k)];
}

BruteForceResult brute_force(const PointCloud& cloud, int k, Index n_min) {
  const Index n = cloud.n();
  if (k < 1 || n_min < 1 || n < k * n_min) throw std::invalid_argument("brute_force: infeasible k / n_min");
  if (stirling2(n, k) > 10'000'000ULL) throw std::length_error("brute_force: instance too large");

  // Depth-first over restricted growth strings with running sums.
  const Index d = cloud.d();
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(d, k);
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  BruteForceResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;

  auto evaluate = [&] {
    ++best.evaluated;
    double f = cloud.c0();
    for (int j = 0; j < k; ++j) f -= sums.col(j).squaredNorm() / static_cast<double>(counts[static_cast<std::size_t>(j)]);
    if (f < best.objective) {
      best.objective = f;
      best_labels = labels;
    }
  };
  auto rec = [&](auto&& self, Index i, int used) -> void {
    if (n - i < k - used) return;
    if (i == n) {
      for (int j = 0; j < k; ++j) {
        if (counts[static_cast<std::size_t>(j)] < n_min) return;
      }
      evaluate();
      return;
    }
    const int top = std::min(used + 1, k);
    for (int j = 0; j < top; ++j) {
      labels[static_cast<std::size_t>(i)] = j;
      sums.col(j) += cloud.point(i);
      ++counts[static_cast<std::size_t>(j)];
      self(self, i + 1, std::max(used, j + 1));
      --counts[static_cast<std::size_t>(j)];
      sums.col(j) -= cloud.point(i);
    }
  };
  rec(rec, 0, 0);
  best.assignment = Assignment(best_labels, k);
  best.objective = kmeans_objective(cloud, best.assignment);
  return best;
}

}  // namespace kmg
