#include "kmg/point_cloud.hpp"

#include <cmath>
#include <string>

namespace kmg {

PointCloud::PointCloud(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw std::invalid_argument("PointCloud: need n >= 1 points of dimension d >= 1");
  }
  if (!data_.allFinite()) {
    throw std::invalid_argument("PointCloud: non-finite coordinate");
  }
  augmented_.resize(data_.rows() + 1, data_.cols());
  augmented_.topRows(data_.rows()) = data_;
  augmented_.row(data_.rows()).setOnes();
  c0_ = data_.squaredNorm();
  total_ = augmented_.rowwise().sum();
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("PointCloud: no points");
  const auto d = static_cast<Index>(rows.front().size());
  Eigen::MatrixXd m(d, static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Index>(rows[i].size()) != d) {
      throw std::invalid_argument("PointCloud: ragged row " + std::to_string(i));
    }
    for (Index r = 0; r < d; ++r) m(r, static_cast<Index>(i)) = rows[i][static_cast<std::size_t>(r)];
  }
  return PointCloud(std::move(m));
}

Assignment::Assignment(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
  if (k_ < 1) throw std::invalid_argument("Assignment: k must be >= 1");
  for (int l : labels_) {
    if (l < 0 || l >= k_) throw std::invalid_argument("Assignment: label out of range");
  }
}

std::vector<Index> Assignment::counts() const {
  std::vector<Index> c(static_cast<std::size_t>(k_), 0);
  for (int l : labels_) ++c[static_cast<std::size_t>(l)];
  return c;
}

bool Assignment::satisfies_min_size(Index n_min) const {
  for (Index c : counts()) {
    if (c < n_min) return false;
  }
  return true;
}

Eigen::MatrixXd Assignment::to_matrix() const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n(), k_);
  for (Index i = 0; i < n(); ++i) g(i, label(i)) = 1.0;
  return g;
}

ZMatrix ZMatrix::from_assignment(const PointCloud& cloud, const Assignment& gamma) {
  if (gamma.n() != cloud.n()) throw std::invalid_argument("ZMatrix: assignment size mismatch");
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(cloud.d() + 1, gamma.k());
  const auto& aug = cloud.augmented();
  for (Index i = 0; i < cloud.n(); ++i) z.col(gamma.label(i)) += aug.col(i);
  return ZMatrix(std::move(z));
}

ZMatrix ZMatrix::from_flat(const Eigen::VectorXd& flat, Index d, Index k) {
  if (flat.size() != (d + 1) * k) throw std::invalid_argument("ZMatrix: flat size mismatch");
  return ZMatrix(Eigen::Map<const Eigen::MatrixXd>(flat.data(), d + 1, k));
}

Eigen::VectorXd ZMatrix::flat() const {
  return Eigen::Map<const Eigen::VectorXd>(z_.data(), z_.size());
}

}  // namespace kmg
