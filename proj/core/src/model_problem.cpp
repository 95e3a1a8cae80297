#include "kmg/model_problem.hpp"

#include <array>
#include <stdexcept>

namespace kmg {

LabeledDataset model_problem_total(double sigma, Index n, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw std::invalid_argument("model_problem: sigma must be > 0");
  if (n < 1) throw std::invalid_argument("model_problem: n must be >= 1");
  constexpr std::array<std::array<double, 2>, 3> centers{{{0.0, 0.0}, {0.0, 2.0}, {2.0, 0.0}}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::MatrixXd data(2, n);
  std::vector<int> labels(static_cast<std::size_t>(n));
  Index col = 0;
  for (int c = 0; c < 3; ++c) {
    const Index size = n / 3 + (c < n % 3 ? 1 : 0);
    for (Index t = 0; t < size; ++t, ++col) {
      data(0, col) = centers[static_cast<std::size_t>(c)][0] + sigma * noise(rng);
      data(1, col) = centers[static_cast<std::size_t>(c)][1] + sigma * noise(rng);
      labels[static_cast<std::size_t>(col)] = c;
    }
  }
  return {PointCloud(std::move(data)), std::move(labels), seed};
}

LabeledDataset model_problem(double sigma, Index n_per_cluster, std::uint64_t seed) {
  if (n_per_cluster < 1) throw std::invalid_argument("model_problem: n_per_cluster must be >= 1");
  return model_problem_total(sigma, 3 * n_per_cluster, seed);
}

}  // namespace kmg
