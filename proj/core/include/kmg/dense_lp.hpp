#pragma once

#include <Eigen/Core>

namespace kmg {

enum class LPStatus { optimal, unbounded, iteration_limit };

struct DenseLPResult {
  LPStatus status = LPStatus::optimal;
  Eigen::VectorXd x;
  double value = 0.0;
  int pivots = 0;
};

/// min c^T x  s.t.  A x <= b, x >= 0, for b >= 0 (the origin is feasible).
/// Dense tableau simplex with Bland's rule.
DenseLPResult solve_dense_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                             int max_pivots = 20000);

}  // namespace kmg
