#include "kmg/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace kmg {

namespace {

void check_sizes(const PointCloud& cloud, Index k, Index n_min) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (n_min < 1) throw std::invalid_argument("n_min must be >= 1");
  if (cloud.n() < k * n_min) throw std::invalid_argument("infeasible: n < k * n_min");
}

}  // namespace

double elementwise_extreme(const PointCloud& cloud, Index k, Index n_min, Index row, Index cluster,
                           Extreme direction) {
  check_sizes(cloud, k, n_min);
  if (row < 0 || row > cloud.d() || cluster < 0 || cluster >= k) {
    throw std::out_of_range("elementwise_extreme: index out of range");
  }
  const Index cap = cloud.n() - (k - 1) * n_min;
  std::vector<double> vals(static_cast<std::size_t>(cloud.n()));
  for (Index i = 0; i < cloud.n(); ++i) vals[static_cast<std::size_t>(i)] = cloud.augmented()(row, i);
  if (direction == Extreme::min) {
    std::sort(vals.begin(), vals.end());
  } else {
    std::sort(vals.begin(), vals.end(), std::greater<>());
  }
  double acc = 0.0;
  for (Index t = 0; t < cap; ++t) {
    const double v = vals[static_cast<std::size_t>(t)];
    const bool improves = direction == Extreme::min ? v < 0.0 : v > 0.0;
    if (t >= n_min && !improves) break;
    acc += v;
  }
  return acc;
}

BoundingSimplex init_simplex(const PointCloud& cloud, Index k, Index n_min) {
  check_sizes(cloud, k, n_min);
  BoundingSimplex s;
  s.lower.resize(cloud.d() + 1, k);
  for (Index i = 0; i <= cloud.d(); ++i) {
    const double lo = elementwise_extreme(cloud, k, n_min, i, 0, Extreme::min);
    s.lower.row(i).setConstant(lo);
  }
  // <1, augmented * Gamma> does not depend on Gamma since each point is
  // assigned exactly once.
  s.upper_sum = cloud.augmented_total().sum();
  return s;
}

Polytope BoundingSimplex::polytope() const {
  const Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(lower.data(), lower.size());
  return Polytope::simplex(flat, upper_sum);
}

std::vector<HalfSpace> BoundingSimplex::halfspaces() const {
  std::vector<HalfSpace> hs;
  const Index dim = lower.size();
  for (Index e = 0; e < dim; ++e) {
    HalfSpace h{Eigen::VectorXd::Zero(dim), -lower.data()[e], CutKind::bound};
    h.normal(e) = -1.0;
    hs.push_back(std::move(h));
  }
  hs.push_back({Eigen::VectorXd::Ones(dim), upper_sum, CutKind::bound});
  return hs;
}

MarginalChart::MarginalChart(const PointCloud& cloud, Index k, const BoundingSimplex& bounds)
    : d_(cloud.d()), k_(k), lower_(bounds.lower), total_(cloud.augmented_total()) {
  if (lower_.rows() != d_ + 1 || lower_.cols() != k_) throw std::invalid_argument("MarginalChart: bounds shape");
  base_ = Eigen::MatrixXd::Zero(d_ + 1, k_);
  slot_of_row_.assign(static_cast<std::size_t>(d_ + 1), -1);
  for (Index i = 0; i <= d_; ++i) {
    const double width = total_(i) - lower_.row(i).sum();
    const double scale = std::max(1.0, cloud.augmented().row(i).cwiseAbs().sum());
    if (k_ >= 2 && width > 1e-12 * scale) {
      slot_of_row_[static_cast<std::size_t>(i)] = static_cast<Index>(free_rows_.size());
      free_rows_.push_back(i);
      base_(i, k_ - 1) = total_(i);
    } else {
      for (Index j = 0; j + 1 < k_; ++j) base_(i, j) = lower_(i, j);
      base_(i, k_ - 1) = total_(i) - base_.row(i).head(k_ - 1).sum();
    }
  }
}

void MarginalChart::to_full(const Eigen::Ref<const Eigen::VectorXd>& y, Eigen::Ref<Eigen::MatrixXd> z) const {
  z = base_;
  const Index km1 = k_ - 1;
  for (std::size_t r = 0; r < free_rows_.size(); ++r) {
    const Index i = free_rows_[r];
    for (Index j = 0; j < km1; ++j) {
      const double v = y(static_cast<Index>(r) * km1 + j);
      z(i, j) += v;
      z(i, km1) -= v;
    }
  }
}

Eigen::MatrixXd MarginalChart::to_full(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  Eigen::MatrixXd z(d_ + 1, k_);
  to_full(y, z);
  return z;
}

Eigen::VectorXd MarginalChart::to_reduced(const Eigen::Ref<const Eigen::MatrixXd>& z) const {
  Eigen::VectorXd y(reduced_dim());
  const Index km1 = k_ - 1;
  for (std::size_t r = 0; r < free_rows_.size(); ++r) {
    for (Index j = 0; j < km1; ++j) y(static_cast<Index>(r) * km1 + j) = z(free_rows_[r], j);
  }
  return y;
}

std::optional<HalfSpace> MarginalChart::project(const HalfSpace& full) const {
  if (full.normal.size() != full_dim()) throw std::invalid_argument("MarginalChart::project: normal size");
  const Eigen::Map<const Eigen::MatrixXd> a(full.normal.data(), d_ + 1, k_);
  HalfSpace h{Eigen::VectorXd(reduced_dim()), full.offset - a.cwiseProduct(base_).sum(), full.kind};
  const Index km1 = k_ - 1;
  for (std::size_t r = 0; r < free_rows_.size(); ++r) {
    const Index i = free_rows_[r];
    for (Index j = 0; j < km1; ++j) h.normal(static_cast<Index>(r) * km1 + j) = a(i, j) - a(i, km1);
  }
  const double scale = std::max(1.0, full.normal.norm());
  if (h.normal.size() == 0 || h.normal.norm() <= 1e-12 * scale) {
    if (h.offset >= -1e-9 * std::max(1.0, std::abs(full.offset))) return std::nullopt;
    throw InfeasibleRegion("MarginalChart::project: constant constraint violated");
  }
  return h;
}

Polytope MarginalChart::initial_polytope() const {
  std::vector<Polytope::SimplexFactor> factors;
  const Index km1 = k_ - 1;
  for (std::size_t r = 0; r < free_rows_.size(); ++r) {
    const Index i = free_rows_[r];
    Polytope::SimplexFactor f;
    for (Index j = 0; j < km1; ++j) f.coords.push_back(static_cast<Index>(r) * km1 + j);
    f.lower = lower_.row(i).head(km1).transpose();
    f.upper_sum = total_(i) - lower_(i, km1);
    factors.push_back(std::move(f));
  }
  return Polytope::simplex_product(reduced_dim(), factors);
}

std::vector<AffineFunctional> MarginalChart::mass_functionals() const {
  std::vector<AffineFunctional> out;
  const Index km1 = k_ - 1;
  const Index slot = slot_of_row_[static_cast<std::size_t>(d_)];
  for (Index j = 0; j < k_; ++j) {
    AffineFunctional f{Eigen::VectorXd::Zero(reduced_dim()), base_(d_, j)};
    if (slot >= 0) {
      if (j < km1) {
        f.coeff(slot * km1 + j) = 1.0;
      } else {
        f.coeff.segment(slot * km1, km1).setConstant(-1.0);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace kmg
