#pragma once

#include <Eigen/Core>

#include "kmg/point_cloud.hpp"

namespace kmg {

/// Masses below this are rejected. The bounding simplex keeps every mass at
/// or above n_min >= 1, so anything smaller indicates a bug upstream.
inline constexpr double kMassFloor = 1e-9;

/// Within-cluster sum of squares, sum_i ||x_i - y_{c(i)}||^2 with y_j the
/// cluster means. Throws std::domain_error on an empty cluster.
double kmeans_objective(const PointCloud& cloud, const Assignment& gamma);

/// F(Z) = c0 - sum_j ||zhat_j||^2 / n_j. Concave on {n_j > 0}.
double concave_objective(const PointCloud& cloud, const ZMatrix& z);
double concave_objective(double c0, const Eigen::Ref<const Eigen::MatrixXd>& z);

/// Gradient of F; column j is (-2 zhat_j / n_j ; ||zhat_j||^2 / n_j^2).
Eigen::MatrixXd gradient(const PointCloud& cloud, const ZMatrix& z);
Eigen::MatrixXd gradient(const Eigen::Ref<const Eigen::MatrixXd>& z);

/// d x k matrix of cluster means.
Eigen::MatrixXd centroids(const PointCloud& cloud, const Assignment& gamma);

}  // namespace kmg
