#include "kmg/objective.hpp"

#include <stdexcept>
#include <string>

namespace kmg {

namespace {

void check_masses(const Eigen::Ref<const Eigen::MatrixXd>& z) {
  const Index last = z.rows() - 1;
  for (Index j = 0; j < z.cols(); ++j) {
    if (!(z(last, j) >= kMassFloor)) {
      throw std::domain_error("cluster mass " + std::to_string(z(last, j)) + " below floor in column " +
                              std::to_string(j));
    }
  }
}

}  // namespace

Eigen::MatrixXd centroids(const PointCloud& cloud, const Assignment& gamma) {
  if (gamma.n() != cloud.n()) throw std::invalid_argument("centroids: assignment size mismatch");
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(cloud.d(), gamma.k());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(gamma.k());
  for (Index i = 0; i < cloud.n(); ++i) {
    sums.col(gamma.label(i)) += cloud.point(i);
    counts(gamma.label(i)) += 1.0;
  }
  for (Index j = 0; j < gamma.k(); ++j) {
    if (counts(j) == 0.0) throw std::domain_error("empty cluster " + std::to_string(j));
    sums.col(j) /= counts(j);
  }
  return sums;
}

double kmeans_objective(const PointCloud& cloud, const Assignment& gamma) {
  const Eigen::MatrixXd y = centroids(cloud, gamma);
  double total = 0.0;
  for (Index i = 0; i < cloud.n(); ++i) total += (cloud.point(i) - y.col(gamma.label(i))).squaredNorm();
  return total;
}

double concave_objective(double c0, const Eigen::Ref<const Eigen::MatrixXd>& z) {
  check_masses(z);
  const Index d = z.rows() - 1;
  double f = c0;
  for (Index j = 0; j < z.cols(); ++j) f -= z.col(j).head(d).squaredNorm() / z(d, j);
  return f;
}

double concave_objective(const PointCloud& cloud, const ZMatrix& z) {
  if (z.d() != cloud.d()) throw std::invalid_argument("concave_objective: dimension mismatch");
  return concave_objective(cloud.c0(), z.matrix());
}

Eigen::MatrixXd gradient(const Eigen::Ref<const Eigen::MatrixXd>& z) {
  check_masses(z);
  const Index d = z.rows() - 1;
  Eigen::MatrixXd g(z.rows(), z.cols());
  for (Index j = 0; j < z.cols(); ++j) {
    const double m = z(d, j);
    g.col(j).head(d) = -2.0 * z.col(j).head(d) / m;
    g(d, j) = z.col(j).head(d).squaredNorm() / (m * m);
  }
  return g;
}

Eigen::MatrixXd gradient(const PointCloud& cloud, const ZMatrix& z) {
  if (z.d() != cloud.d()) throw std::invalid_argument("gradient: dimension mismatch");
  return gradient(z.matrix());
}

}  // namespace kmg
