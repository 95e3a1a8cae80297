#include "kmg/dense_lp.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace kmg {

// Condensed tableau: x_B + T x_N = rhs, objective value + cbar . x_N.
// Variables 0..nv-1 are structural, nv..nv+m-1 are slacks.
DenseLPResult solve_dense_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                             int max_pivots) {
  const Eigen::Index m = a.rows();
  const Eigen::Index nv = a.cols();
  if (b.size() != m || c.size() != nv) throw std::invalid_argument("solve_dense_lp: shape mismatch");
  if (m > 0 && b.minCoeff() < 0.0) throw std::invalid_argument("solve_dense_lp: b must be >= 0");

  Eigen::MatrixXd t = a;
  Eigen::VectorXd rhs = b;
  Eigen::RowVectorXd cbar = c.transpose();
  double value = 0.0;
  std::vector<Eigen::Index> nonbasic(static_cast<std::size_t>(nv));
  std::vector<Eigen::Index> basic(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < nv; ++j) nonbasic[static_cast<std::size_t>(j)] = j;
  for (Eigen::Index r = 0; r < m; ++r) basic[static_cast<std::size_t>(r)] = nv + r;

  const double eps = 1e-11 * std::max(1.0, c.cwiseAbs().maxCoeff());
  DenseLPResult out;
  for (;;) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < nv; ++j) {
      if (cbar(j) < -eps &&
          (enter < 0 || nonbasic[static_cast<std::size_t>(j)] < nonbasic[static_cast<std::size_t>(enter)])) {
        enter = j;
      }
    }
    if (enter < 0) break;
    if (out.pivots >= max_pivots) {
      out.status = LPStatus::iteration_limit;
      break;
    }
    Eigen::Index leave = -1;
    double best = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
      const double p = t(r, enter);
      if (p <= 1e-12) continue;
      const double ratio = rhs(r) / p;
      if (leave < 0 || ratio < best - 1e-14 ||
          (ratio <= best + 1e-14 && basic[static_cast<std::size_t>(r)] < basic[static_cast<std::size_t>(leave)])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) {
      out.status = LPStatus::unbounded;
      break;
    }

    const double p = t(leave, enter);
    const Eigen::RowVectorXd prow = t.row(leave) / p;
    const double prhs = rhs(leave) / p;
    const Eigen::VectorXd pcol = t.col(enter);
    t.noalias() -= pcol * prow;
    rhs -= pcol * prhs;
    t.col(enter) = -pcol / p;
    t.row(leave) = prow;
    t(leave, enter) = 1.0 / p;
    rhs(leave) = prhs;
    const double cs = cbar(enter);
    cbar -= cs * prow;
    cbar(enter) = -cs / p;
    value += cs * prhs;
    std::swap(basic[static_cast<std::size_t>(leave)], nonbasic[static_cast<std::size_t>(enter)]);
    ++out.pivots;
  }

  out.x = Eigen::VectorXd::Zero(nv);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index v = basic[static_cast<std::size_t>(r)];
    if (v < nv) out.x(v) = std::max(0.0, rhs(r));
  }
  out.value = c.dot(out.x);
  return out;
}

}  // namespace kmg
