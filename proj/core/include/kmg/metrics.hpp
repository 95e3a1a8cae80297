#pragma once

#include <vector>

#include "kmg/point_cloud.hpp"

namespace kmg {

/// (1/n) sum_j max_c |cluster_j ∩ class_c|.
double purity(const Assignment& gamma, const std::vector<int>& labels);

/// Mutual information over the arithmetic mean of the two entropies; 0 when
/// both entropies vanish.
double nmi(const Assignment& gamma, const std::vector<int>& labels);

}  // namespace kmg
