#include "kmg/accelerators.hpp"

#include <stdexcept>

namespace kmg {

std::vector<HalfSpace> symmetry_cuts(Index k, Index d) {
  if (k < 2) throw std::invalid_argument("symmetry_cuts: k must be >= 2");
  const Index rows = d + 1;
  std::vector<HalfSpace> out;
  for (Index j = 0; j + 1 < k; ++j) {
    HalfSpace h{Eigen::VectorXd::Zero(rows * k), 0.0, CutKind::symmetry};
    h.normal.segment(j * rows, rows).setConstant(1.0);
    h.normal.segment((j + 1) * rows, rows).setConstant(-1.0);
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<HalfSpace> centroid_box_cuts(const PointCloud& cloud, Index k) {
  const Index d = cloud.d();
  const Index rows = d + 1;
  const Eigen::VectorXd hi = cloud.data().rowwise().maxCoeff();
  const Eigen::VectorXd lo = cloud.data().rowwise().minCoeff();
  std::vector<HalfSpace> out;
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < d; ++i) {
      HalfSpace upper{Eigen::VectorXd::Zero(rows * k), 0.0, CutKind::box};
      upper.normal(i + rows * j) = 1.0;
      upper.normal(d + rows * j) = -hi(i);
      out.push_back(std::move(upper));
      HalfSpace lower{Eigen::VectorXd::Zero(rows * k), 0.0, CutKind::box};
      lower.normal(i + rows * j) = -1.0;
      lower.normal(d + rows * j) = lo(i);
      out.push_back(std::move(lower));
    }
  }
  return out;
}

}  // namespace kmg
