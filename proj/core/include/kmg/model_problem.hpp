#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "kmg/point_cloud.hpp"

namespace kmg {

struct LabeledDataset {
  PointCloud cloud;
  std::optional<std::vector<int>> labels;
  std::uint64_t seed = 0;
};

/// Three isotropic Gaussians with standard deviation sigma centred at
/// (0,0), (0,2) and (2,0); n_per_cluster samples each, labels 0, 1, 2.
LabeledDataset model_problem(double sigma, Index n_per_cluster, std::uint64_t seed);

/// Same generator with n points in total, split as evenly as possible
/// (earlier clusters take the remainder).
LabeledDataset model_problem_total(double sigma, Index n, std::uint64_t seed);

}  // namespace kmg
