#pragma once

#include <vector>

#include "kmg/point_cloud.hpp"
#include "kmg/polytope.hpp"

namespace kmg {

/// k-1 orderings <1, z_j> - <1, z_{j+1}> <= 0 in full (d+1) x k
/// coordinates. Every clustering has a relabelling that satisfies them.
std::vector<HalfSpace> symmetry_cuts(Index k, Index d);

/// Bounding-box cuts (z_j)_i - n_j S_i <= 0 and n_j s_i - (z_j)_i <= 0 with
/// s, S the per-coordinate data extremes.
std::vector<HalfSpace> centroid_box_cuts(const PointCloud& cloud, Index k);

}  // namespace kmg
