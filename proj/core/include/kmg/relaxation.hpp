#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "kmg/point_cloud.hpp"
#include "kmg/polytope.hpp"

namespace kmg {

enum class Extreme { min, max };

/// Exact min (or max) of (augmented * Gamma)_{row, cluster} over the relaxed
/// assignment polytope with cluster sizes in [n_min, n - (k-1) n_min]. Only
/// one column of Gamma matters, so the optimum takes the n_min most extreme
/// entries of the row plus any further entries that improve the value, up to
/// the size cap.
double elementwise_extreme(const PointCloud& cloud, Index k, Index n_min, Index row, Index cluster,
                           Extreme direction);

/// Initial outer approximation {Z : Z >= lower, <1, Z> <= upper_sum}.
struct BoundingSimplex {
  Eigen::MatrixXd lower;  // (d+1) x k
  double upper_sum = 0.0;

  /// The simplex in full (d+1)k coordinates, column-major flattening.
  Polytope polytope() const;
  std::vector<HalfSpace> halfspaces() const;
};

/// Throws std::invalid_argument when n < k * n_min.
BoundingSimplex init_simplex(const PointCloud& cloud, Index k, Index n_min);

/// Affine chart of the fixed-marginal subspace Z 1 = augmented 1.
///
/// The last cluster is eliminated, z_k = total - sum_{j<k} z_j, which leaves
/// (d+1)(k-1) reduced coordinates. Rows whose bounding-simplex width is zero
/// (e.g. the count row when n = k n_min) are pinned as well, so the reduced
/// polytope is always full-dimensional. Reduced coordinate (r, j) sits at
/// index r (k-1) + j, where r enumerates free rows.
class MarginalChart {
 public:
  MarginalChart(const PointCloud& cloud, Index k, const BoundingSimplex& bounds);

  Index d() const { return d_; }
  Index k() const { return k_; }
  Index full_dim() const { return (d_ + 1) * k_; }
  Index reduced_dim() const { return static_cast<Index>(free_rows_.size()) * (k_ - 1); }
  const std::vector<Index>& free_rows() const { return free_rows_; }

  /// (d+1) x k image of a reduced point.
  Eigen::MatrixXd to_full(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  void to_full(const Eigen::Ref<const Eigen::VectorXd>& y, Eigen::Ref<Eigen::MatrixXd> z) const;
  /// Reduced coordinates of a Z that satisfies the fixed marginal.
  Eigen::VectorXd to_reduced(const Eigen::Ref<const Eigen::MatrixXd>& z) const;

  /// Restriction of a full-space half-space (flattened (d+1) x k normal).
  /// Returns nullopt when the restriction is constant and satisfied; throws
  /// InfeasibleRegion when it is constant and violated.
  std::optional<HalfSpace> project(const HalfSpace& full) const;

  /// Bounding simplex intersected with the subspace: a product of one
  /// simplex per free row.
  Polytope initial_polytope() const;

  /// Cluster masses n_j as affine functionals of reduced coordinates.
  std::vector<AffineFunctional> mass_functionals() const;

 private:
  Index d_ = 0;
  Index k_ = 0;
  Eigen::MatrixXd lower_;
  Eigen::VectorXd total_;
  Eigen::MatrixXd base_;
  std::vector<Index> free_rows_;
  std::vector<Index> slot_of_row_;  // -1 for pinned rows
};

}  // namespace kmg
