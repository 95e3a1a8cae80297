#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kmg/assignment_lp.hpp"

namespace kmg {

namespace {

struct Atom {
  Eigen::MatrixXd z;
  double weight;
};

Eigen::MatrixXd image(const PointCloud& cloud, const Assignment& gamma) {
  return ZMatrix::from_assignment(cloud, gamma).matrix();
}

}  // namespace

Projection ls_project(const PointCloud& cloud, const Eigen::Ref<const Eigen::MatrixXd>& target, Index n_min,
                      double tol, int max_iter) {
  if (target.rows() != cloud.d() + 1) throw std::invalid_argument("ls_project: target shape");
  if (!target.allFinite()) throw std::invalid_argument("ls_project: non-finite target");
  if (tol <= 0.0) tol = 1e-6 * target.norm();
  const Eigen::MatrixXd xt = cloud.augmented().transpose();

  std::vector<Atom> atoms;
  atoms.push_back({image(cloud, linear_min(-(xt * target), n_min).assignment), 1.0});
  Eigen::MatrixXd z = atoms.front().z;

  Projection out;
  out.gap = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXd g = z - target;
    out.objective_history.push_back(g.squaredNorm());
    const Eigen::MatrixXd s = image(cloud, linear_min(xt * g, n_min).assignment);
    out.gap = 2.0 * g.cwiseProduct(z - s).sum();
    out.iterations = it + 1;
    if (out.gap <= tol * tol) break;

    std::size_t away = 0;
    double away_score = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const double score = g.cwiseProduct(atoms[a].z).sum();
      if (score > away_score) {
        away_score = score;
        away = a;
      }
    }
    const double fw_slope = g.cwiseProduct(s - z).sum();
    const double away_slope = g.cwiseProduct(z - atoms[away].z).sum();

    Eigen::MatrixXd dir;
    double step_max = 1.0;
    const bool forward = fw_slope <= away_slope || atoms.size() == 1;
    if (forward) {
      dir = s - z;
    } else {
      dir = z - atoms[away].z;
      const double w = atoms[away].weight;
      step_max = w / (1.0 - w);
    }
    const double dd = dir.squaredNorm();
    if (dd <= 0.0) break;
    const double step = std::clamp(-g.cwiseProduct(dir).sum() / dd, 0.0, step_max);
    if (step <= 0.0) break;
    z += step * dir;

    if (forward) {
      for (Atom& a : atoms) a.weight *= 1.0 - step;
      std::size_t hit = atoms.size();
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        if ((atoms[a].z - s).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, s.cwiseAbs().maxCoeff())) hit = a;
      }
      if (hit == atoms.size()) {
        atoms.push_back({s, step});
      } else {
        atoms[hit].weight += step;
      }
    } else {
      for (Atom& a : atoms) a.weight *= 1.0 + step;
      atoms[away].weight -= step;
      if (step >= step_max) atoms[away].weight = 0.0;
    }
    std::erase_if(atoms, [](const Atom& a) { return a.weight <= 1e-15; });
  }

  out.point = ZMatrix(z);
  const Eigen::MatrixXd normal = target - z;
  out.distance = normal.norm();
  LinearMinResult lp = linear_min(-(xt * normal), n_min);
  out.assignment = std::move(lp.assignment);
  if (out.distance <= tol) return out;
  const double offset = -lp.value;
  const double reach = normal.cwiseProduct(target).sum();
  if (reach <= offset + 1e-12 * std::max(1.0, std::abs(offset))) return out;
  HalfSpace h;
  h.normal = Eigen::Map<const Eigen::VectorXd>(normal.data(), normal.size());
  h.offset = offset;
  h.kind = CutKind::least_squares;
  out.cut = std::move(h);
  return out;
}

}  // namespace kmg
