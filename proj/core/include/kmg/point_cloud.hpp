#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace kmg {

using Index = Eigen::Index;

/// Raised when a feasible region becomes empty (all vertices cut, empty
/// integer range, etc.). Branch-and-bound callers prune on it.
class InfeasibleRegion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data matrix X (d x n, one point per column) with cached constants.
class PointCloud {
 public:
  explicit PointCloud(Eigen::MatrixXd data);

  /// Build from row-major points (one std::vector per point).
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  Index n() const { return data_.cols(); }
  Index d() const { return data_.rows(); }

  const Eigen::MatrixXd& data() const { return data_; }
  /// (d+1) x n: data with a row of ones appended.
  const Eigen::MatrixXd& augmented() const { return augmented_; }
  /// Sum of squared column norms.
  double c0() const { return c0_; }
  /// Row sums of the augmented matrix, i.e. augmented * 1.
  const Eigen::VectorXd& augmented_total() const { return total_; }

  auto point(Index i) const { return data_.col(i); }

 private:
  Eigen::MatrixXd data_;
  Eigen::MatrixXd augmented_;
  Eigen::VectorXd total_;
  double c0_ = 0.0;
};

/// Hard assignment of n points to k clusters, stored as one label per point.
/// The n x k 0/1 matrix is only materialized on request.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::vector<int> labels, int k);

  Index n() const { return static_cast<Index>(labels_.size()); }
  int k() const { return k_; }
  int label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }

  std::vector<Index> counts() const;
  /// True when every cluster holds at least n_min points.
  bool satisfies_min_size(Index n_min) const;
  Eigen::MatrixXd to_matrix() const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

/// Image point Z = augmented * Gamma, (d+1) x k. Column j stacks the
/// coordinate sum of cluster j over its mass.
class ZMatrix {
 public:
  ZMatrix() = default;
  explicit ZMatrix(Eigen::MatrixXd z) : z_(std::move(z)) {}

  static ZMatrix from_assignment(const PointCloud& cloud, const Assignment& gamma);
  /// From a flattened (column-major) vector of length (d+1)k.
  static ZMatrix from_flat(const Eigen::VectorXd& flat, Index d, Index k);

  Index d() const { return z_.rows() - 1; }
  Index k() const { return z_.cols(); }
  auto coords(Index j) const { return z_.col(j).head(z_.rows() - 1); }
  double mass(Index j) const { return z_(z_.rows() - 1, j); }

  const Eigen::MatrixXd& matrix() const { return z_; }
  Eigen::VectorXd flat() const;

 private:
  Eigen::MatrixXd z_;
};

}  // namespace kmg
