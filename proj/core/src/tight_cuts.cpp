#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "kmg/assignment_lp.hpp"
#include "kmg/dense_lp.hpp"

namespace kmg {

namespace {

// Dual propagation order over the basis forest. Nodes are points [0, n)
// followed by clusters [n, n+k).
struct BasisTree {
  struct Step {
    Index point;
    Index cluster;
    bool cluster_known;  // true: derive v_point, false: derive u_cluster
  };
  std::vector<Index> roots;  // clusters with a basic slack
  std::vector<Step> steps;
};

BasisTree build_tree(const LPBasis& basis) {
  const Index n = basis.n;
  const Index k = basis.k;
  if (static_cast<Index>(basis.basic.size()) != n + k) throw std::invalid_argument("basis: wrong size");
  std::vector<std::vector<Index>> point_edges(static_cast<std::size_t>(n));
  std::vector<std::vector<Index>> cluster_edges(static_cast<std::size_t>(k));
  BasisTree tree;
  for (Index var : basis.basic) {
    if (var < 0 || var >= basis.num_variables()) throw std::invalid_argument("basis: index out of range");
    if (var >= n * k) {
      tree.roots.push_back(var - n * k);
    } else {
      point_edges[static_cast<std::size_t>(var % n)].push_back(var / n);
      cluster_edges[static_cast<std::size_t>(var / n)].push_back(var % n);
    }
  }
  std::vector<char> seen(static_cast<std::size_t>(n + k), 0);
  std::deque<Index> queue;
  for (Index j : tree.roots) {
    if (seen[static_cast<std::size_t>(n + j)]) throw std::invalid_argument("basis: singular (two roots)");
    seen[static_cast<std::size_t>(n + j)] = 1;
    queue.push_back(n + j);
  }
  std::size_t used_edges = 0;
  while (!queue.empty()) {
    const Index node = queue.front();
    queue.pop_front();
    if (node >= n) {
      const Index j = node - n;
      for (Index i : cluster_edges[static_cast<std::size_t>(j)]) {
        if (seen[static_cast<std::size_t>(i)]) continue;
        seen[static_cast<std::size_t>(i)] = 1;
        tree.steps.push_back({i, j, true});
        ++used_edges;
        queue.push_back(i);
      }
    } else {
      for (Index j : point_edges[static_cast<std::size_t>(node)]) {
        if (seen[static_cast<std::size_t>(n + j)]) continue;
        seen[static_cast<std::size_t>(n + j)] = 1;
        tree.steps.push_back({node, j, false});
        ++used_edges;
        queue.push_back(n + j);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end() ||
      used_edges + tree.roots.size() != basis.basic.size()) {
    throw std::invalid_argument("basis: singular basis matrix");
  }
  return tree;
}

}  // namespace

Eigen::MatrixXd reduced_cost_operator(const PointCloud& cloud, const LPBasis& basis) {
  const Index n = basis.n;
  const Index k = basis.k;
  if (n != cloud.n()) throw std::invalid_argument("reduced_cost_operator: basis size");
  const BasisTree tree = build_tree(basis);
  const std::vector<Index> nonbasic = basis.nonbasic();
  const Index rows = cloud.d() + 1;
  const Eigen::MatrixXd& x = cloud.augmented();

  Eigen::MatrixXd op(static_cast<Index>(nonbasic.size()), rows * k);
  Eigen::VectorXd v(n);
  Eigen::VectorXd u(k);
  for (Index c = 0; c < k; ++c) {
    for (Index r = 0; r < rows; ++r) {
      // Costs of the unit direction e_{rc}: W_ij = x(r, i) when j == c.
      auto w = [&](Index i, Index j) { return j == c ? x(r, i) : 0.0; };
      u.setZero();
      for (const auto& s : tree.steps) {
        if (s.cluster_known) {
          v(s.point) = w(s.point, s.cluster) - u(s.cluster);
        } else {
          u(s.cluster) = w(s.point, s.cluster) - v(s.point);
        }
      }
      const Index col = r + rows * c;
      for (std::size_t t = 0; t < nonbasic.size(); ++t) {
        const Index var = nonbasic[t];
        op(static_cast<Index>(t), col) = var >= n * k ? u(var - n * k) : w(var % n, var / n) - v(var % n) - u(var / n);
      }
    }
  }
  return op;
}

std::vector<Eigen::MatrixXd> tight_cuts(const PointCloud& cloud, const LPBasis& basis,
                                        const Eigen::Ref<const Eigen::MatrixXd>& grad,
                                        const TightCutOptions& options) {
  std::vector<Eigen::MatrixXd> out;
  if (options.count <= 0) return out;
  Eigen::MatrixXd op;
  try {
    op = reduced_cost_operator(cloud, basis);
  } catch (const std::invalid_argument&) {
    return out;
  }
  const Index p = op.cols();
  const Index rows = op.rows();
  const Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(Eigen::MatrixXd(grad).data(), p);
  const double radius = g.cwiseAbs().maxCoeff();
  if (radius == 0.0 || rows == 0) return out;
  const Eigen::VectorXd s0 = (op * g).cwiseMax(0.0);
  const double s_scale = std::max(1.0, s0.maxCoeff()) * 1e-9;
  const Eigen::VectorXd col_sum = op.colwise().sum().transpose();

  std::vector<Eigen::VectorXd> previous;
  for (int t = 0; t < options.count; ++t) {
    std::vector<Index> active;
    for (Index q = 0; q < rows; ++q) {
      if (s0(q) <= s_scale) active.push_back(q);
    }
    Eigen::VectorXd dg = Eigen::VectorXd::Zero(p);
    bool solved = false;
    for (int round = 0; round < 64; ++round) {
      const Index fixed = 2 * p + 2 + static_cast<Index>(previous.size());
      const Index m = fixed + static_cast<Index>(active.size());
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, 2 * p);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
      a.topLeftCorner(2 * p, 2 * p).setIdentity();
      b.head(2 * p).setConstant(radius);
      a.block(2 * p, 0, 1, p) = g.transpose();
      a.block(2 * p, p, 1, p) = -g.transpose();
      a.row(2 * p + 1) = -a.row(2 * p);
      for (std::size_t j = 0; j < previous.size(); ++j) {
        const Index row = 2 * p + 2 + static_cast<Index>(j);
        a.block(row, 0, 1, p) = previous[j].transpose();
        a.block(row, p, 1, p) = -previous[j].transpose();
        b(row) = options.alpha * radius;
      }
      for (std::size_t j = 0; j < active.size(); ++j) {
        const Index row = fixed + static_cast<Index>(j);
        a.block(row, 0, 1, p) = -op.row(active[j]);
        a.block(row, p, 1, p) = op.row(active[j]);
        b(row) = s0(active[j]);
      }
      Eigen::VectorXd c(2 * p);
      c << col_sum, -col_sum;
      const DenseLPResult lp = solve_dense_lp(a, b, c);
      if (lp.status != LPStatus::optimal) break;
      dg = lp.x.head(p) - lp.x.tail(p);

      const Eigen::VectorXd s = s0 + op * dg;
      std::vector<std::pair<double, Index>> violated;
      for (Index q = 0; q < rows; ++q) {
        if (s(q) < -s_scale) violated.emplace_back(s(q), q);
      }
      if (violated.empty()) {
        solved = true;
        break;
      }
      std::sort(violated.begin(), violated.end());
      const std::size_t take = std::min<std::size_t>(violated.size(), 64);
      for (std::size_t j = 0; j < take; ++j) active.push_back(violated[j].second);
    }
    if (!solved || dg.cwiseAbs().maxCoeff() <= 1e-9 * radius) break;
    const Eigen::VectorXd moved = g + dg;
    out.push_back(Eigen::Map<const Eigen::MatrixXd>(moved.data(), grad.rows(), grad.cols()));
    previous.push_back(dg.normalized());
  }
  return out;
}

}  // namespace kmg
