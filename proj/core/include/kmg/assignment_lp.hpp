#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "kmg/point_cloud.hpp"
#include "kmg/polytope.hpp"

namespace kmg {

/// Basis of the standard-form transportation LP
///
///   min <W, Gamma>  s.t.  Gamma 1 = 1,  Gamma^T 1 - s = n_min,  Gamma, s >= 0
///
/// over variables x = (vec(Gamma); s). Gamma_{ij} has index i + n j and the
/// slack of cluster j has index n k + j. |basic| = n + k.
struct LPBasis {
  Index n = 0;
  Index k = 0;
  std::vector<Index> basic;  // sorted

  Index num_variables() const { return n * k + k; }
  static Index gamma_index(Index n, Index i, Index j) { return i + n * j; }
  static Index slack_index(Index n, Index k, Index j) { return n * k + j; }
  std::vector<Index> nonbasic() const;
};

struct LinearMinResult {
  Assignment assignment;
  double value = 0.0;
  /// Dual prices of the cluster-size rows (>= 0).
  Eigen::VectorXd cluster_duals;
  /// Optimal basis; absent when no nonsingular basis consistent with the
  /// computed duals could be assembled (degenerate n = k n_min cases).
  std::optional<LPBasis> basis;
};

/// Exact minimiser of <W, Gamma> over the relaxed assignment polytope with
/// cluster sizes >= n_min. The constraint matrix is totally unimodular, so
/// the returned Gamma is integral. Solved as a min-cost flow by successive
/// shortest paths on the k-node cluster graph, starting from the greedy
/// row-wise minimum. Ties resolve to the lowest point, then lowest cluster.
/// Throws std::invalid_argument when n < k n_min.
LinearMinResult linear_min(const Eigen::Ref<const Eigen::MatrixXd>& cost, Index n_min);

/// Supporting half-space of F = {augmented * Gamma} with outer normal
/// -grad: <grad, Z> >= b, stored as <-grad, Z> <= -b.
struct GradientCut {
  HalfSpace halfspace;  // flattened (d+1) x k normal
  Assignment assignment;
  double value = 0.0;  // b
  std::optional<LPBasis> basis;
  bool degenerate = false;  // grad == 0; the half-space is meaningless
};

GradientCut cut_from_gradient(const PointCloud& cloud, const Eigen::Ref<const Eigen::MatrixXd>& grad, Index n_min);

struct LocalSearchResult {
  Assignment assignment;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> history;  // objective per accepted step, starting with gamma0
};

/// Fixed-point iteration Gamma <- argmin <augmented^T grad F(augmented Gamma), Gamma>
/// while the k-means objective strictly decreases.
LocalSearchResult local_search(const PointCloud& cloud, const Assignment& gamma0, Index n_min);

struct Projection {
  ZMatrix point;          // approximate projection onto F
  Assignment assignment;  // integral maximiser defining the cut offset
  std::optional<HalfSpace> cut;
  double distance = 0.0;
  double gap = 0.0;  // final Frank-Wolfe duality gap
  int iterations = 0;
  std::vector<double> objective_history;  // ||z - target||^2 per iteration
};

/// Least-squares projection of `target` onto F by away-step conditional
/// gradient with linear_min as the oracle. When the distance exceeds tol the
/// separating half-space <target - zhat, Z> <= max_F <target - zhat, .> is
/// returned; its offset comes from an exact LP so the cut stays valid even
/// if the projection is inexact.
Projection ls_project(const PointCloud& cloud, const Eigen::Ref<const Eigen::MatrixXd>& target, Index n_min,
                      double tol, int max_iter = 500);

/// Linear map from a cost direction G ((d+1) x k, flattened column-major)
/// to the reduced costs of the nonbasic variables of `basis` under costs
/// W = augmented^T G. Rows follow LPBasis::nonbasic().
Eigen::MatrixXd reduced_cost_operator(const PointCloud& cloud, const LPBasis& basis);

struct TightCutOptions {
  double alpha = 0.1;
  int count = 4;
};

/// Perturbed normals grad + dG for which the basis stays optimal (all
/// reduced costs >= 0). Each dG solves
///   min 1^T s  s.t.  s = s0 + V dG >= 0,  <grad, dG> = 0,
///                    <dG_prev/|dG_prev|, dG> <= alpha r,  |dG|_inf <= r
/// with r = |grad|_inf, which drives reduced costs to zero and tilts the
/// half-space onto edges of F through the current vertex. Returns the
/// (d+1) x k normals; empty when the basis admits no perturbation.
std::vector<Eigen::MatrixXd> tight_cuts(const PointCloud& cloud, const LPBasis& basis,
                                        const Eigen::Ref<const Eigen::MatrixXd>& grad,
                                        const TightCutOptions& options = {});

}  // namespace kmg
