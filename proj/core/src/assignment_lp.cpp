#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kmg/assignment_lp.hpp"
#include "kmg/objective.hpp"

namespace kmg {

GradientCut cut_from_gradient(const PointCloud& cloud, const Eigen::Ref<const Eigen::MatrixXd>& grad, Index n_min) {
  if (grad.rows() != cloud.d() + 1) throw std::invalid_argument("cut_from_gradient: gradient shape");
  if (!grad.allFinite()) throw std::invalid_argument("cut_from_gradient: non-finite gradient");
  const Eigen::MatrixXd w = cloud.augmented().transpose() * grad;
  LinearMinResult lp = linear_min(w, n_min);

  GradientCut cut;
  cut.halfspace.normal = -Eigen::Map<const Eigen::VectorXd>(Eigen::MatrixXd(grad).data(), grad.size());
  cut.halfspace.offset = -lp.value;
  cut.halfspace.kind = CutKind::gradient;
  cut.value = lp.value;
  cut.assignment = std::move(lp.assignment);
  cut.basis = std::move(lp.basis);
  cut.degenerate = grad.cwiseAbs().maxCoeff() == 0.0;
  return cut;
}

LocalSearchResult local_search(const PointCloud& cloud, const Assignment& gamma0, Index n_min) {
  if (gamma0.n() != cloud.n()) throw std::invalid_argument("local_search: assignment size");
  if (!gamma0.satisfies_min_size(std::max<Index>(n_min, 1))) {
    throw std::invalid_argument("local_search: initial assignment violates cluster size bound");
  }
  LocalSearchResult out;
  out.assignment = gamma0;
  out.objective = kmeans_objective(cloud, gamma0);
  out.history.push_back(out.objective);
  const Eigen::MatrixXd w_scale = cloud.augmented().transpose();
  const int cap = static_cast<int>(cloud.n() * gamma0.k()) + 1;
  while (out.iterations < cap) {
    const ZMatrix z = ZMatrix::from_assignment(cloud, out.assignment);
    const Eigen::MatrixXd w = w_scale * gradient(cloud, z);
    LinearMinResult lp = linear_min(w, n_min);
    ++out.iterations;
    const double next = kmeans_objective(cloud, lp.assignment);
    if (!(next < out.objective - 1e-13 * std::max(1.0, std::abs(out.objective)))) break;
    out.assignment = std::move(lp.assignment);
    out.objective = next;
    out.history.push_back(next);
  }
  return out;
}

}  // namespace kmg
