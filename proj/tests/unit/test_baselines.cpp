#include <gtest/gtest.h>

#include <map>
#include <random>

#include "kmg/baselines.hpp"
#include "kmg/metrics.hpp"
#include "kmg/model_problem.hpp"
#include "kmg/objective.hpp"
#include "oracles.hpp"

using namespace kmg;

namespace {

PointCloud line(const std::vector<double>& v) {
  Eigen::MatrixXd x(1, static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x(0, static_cast<Index>(i)) = v[i];
  return PointCloud(x);
}

}  // namespace

TEST(Lloyd, ConvergesOnSeparatedPairs) {
  const PointCloud c = line({0, 1, 10, 11});
  Eigen::MatrixXd init(1, 2);
  init << 0, 1;
  const LloydResult r = lloyd(c, init);
  EXPECT_DOUBLE_EQ(r.objective, 1.0);
  for (std::size_t t = 1; t < r.history.size(); ++t) EXPECT_LE(r.history[t], r.history[t - 1] + 1e-12);
}

TEST(Lloyd, RepairsEmptyCluster) {
  const PointCloud c = line({0, 1, 2, 3});
  Eigen::MatrixXd init(1, 2);
  init << 1.5, 100;
  const LloydResult r = lloyd(c, init);
  EXPECT_TRUE(r.assignment.satisfies_min_size(1));
  EXPECT_LE(r.objective, 2.0);
}

TEST(KmeansPP, KEqualsNPicksEveryPoint) {
  const PointCloud c = line({3, -1, 8, 5});
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd s = kmeanspp_seed(c, 4, rng);
  std::vector<double> got(s.data(), s.data() + 4);
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, (std::vector<double>{-1, 3, 5, 8}));
}

TEST(KmeansPP, DuplicatePointsFallBackToUniform) {
  const PointCloud c = line({2, 2, 2});
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd s = kmeanspp_seed(c, 3, rng);
  EXPECT_TRUE((s.array() == 2.0).all());
}

TEST(KmeansPP, SecondCentreFollowsSquaredDistance) {
  const std::vector<double> v{0, 1, 3, 7};
  const PointCloud c = line(v);
  std::mt19937_64 rng(3);
  const int draws = 100000;
  std::map<std::pair<double, double>, int> freq;
  for (int t = 0; t < draws; ++t) {
    const Eigen::MatrixXd s = kmeanspp_seed(c, 2, rng);
    ++freq[{s(0, 0), s(0, 1)}];
  }
  for (double a : v) {
    double total = 0.0;
    for (double b : v) total += (a - b) * (a - b);
    for (double b : v) {
      const double expected = 0.25 * (a - b) * (a - b) / total;
      const double seen = freq[{a, b}] / static_cast<double>(draws);
      EXPECT_NEAR(seen, expected, 0.01);
    }
  }
}

TEST(KmeansPP, RestartsAreSeeded) {
  const LabeledDataset ds = model_problem_total(1.0, 60, 4);
  const RestartSummary a = kmeanspp_restarts(ds.cloud, 3, 5, 9);
  const RestartSummary b = kmeanspp_restarts(ds.cloud, 3, 5, 9);
  EXPECT_EQ(a.best.assignment, b.best.assignment);
  EXPECT_LE(a.best.objective, a.mean_objective);
  EXPECT_EQ(a.restarts, 5);
}

TEST(BruteForce, MatchesOneDimensionalDynamicProgram) {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(6 + trial % 6));
    for (double& x : v) x = 3.0 * g(rng);
    const int k = 2 + trial % 3;
    const BruteForceResult r = brute_force(line(v), k);
    EXPECT_NEAR(r.objective, oracle::dp_1d(v, k), 1e-9);
    EXPECT_EQ(r.evaluated, stirling2(static_cast<Index>(v.size()), k));
  }
}

TEST(BruteForce, RespectsMinimumSize) {
  std::mt19937_64 rng(52);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(2, 8);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  const BruteForceResult r = brute_force(PointCloud(x), 3, 2);
  EXPECT_TRUE(r.assignment.satisfies_min_size(2));
  EXPECT_NEAR(r.objective, oracle::exhaustive_kmeans(x, 3, 2), 1e-9);
}

TEST(BruteForce, RefusesHugeInstances) {
  EXPECT_THROW(brute_force(line(std::vector<double>(30, 1.0)), 3), std::length_error);
}

TEST(Stirling, KnownValues) {
  EXPECT_EQ(stirling2(4, 2), 7u);
  EXPECT_EQ(stirling2(10, 3), 9330u);
  EXPECT_EQ(stirling2(5, 0), 0u);
  EXPECT_EQ(stirling2(0, 0), 1u);
  EXPECT_EQ(stirling2(200, 20), std::numeric_limits<std::uint64_t>::max());
}

TEST(Metrics, PurityAndNmiExamples) {
  const Assignment a({0, 0, 1, 1}, 2);
  EXPECT_DOUBLE_EQ(purity(a, {0, 0, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(nmi(a, {0, 0, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(purity(a, {0, 1, 0, 1}), 0.5);
  EXPECT_NEAR(nmi(a, {0, 1, 0, 1}), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(purity(Assignment({0, 0, 0, 1}, 2), {0, 0, 1, 1}), 0.75);
  EXPECT_THROW(purity(a, {0, 1}), std::invalid_argument);
}

TEST(Metrics, InvariantUnderRelabelling) {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> cl(40), truth(40);
    for (int i = 0; i < 40; ++i) {
      cl[static_cast<std::size_t>(i)] = pick(rng);
      truth[static_cast<std::size_t>(i)] = pick(rng);
    }
    std::vector<int> perm{2, 0, 1};
    std::vector<int> cl2(40), truth2(40);
    for (int i = 0; i < 40; ++i) {
      cl2[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(cl[static_cast<std::size_t>(i)])];
      truth2[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(truth[static_cast<std::size_t>(i)])] + 5;
    }
    const Assignment a(cl, 3), b(cl2, 3);
    EXPECT_NEAR(purity(a, truth), purity(b, truth2), 1e-15);
    EXPECT_NEAR(nmi(a, truth), nmi(b, truth2), 1e-12);
    EXPECT_NEAR(nmi(a, truth), nmi(Assignment(truth, 3), cl), 1e-12);
    EXPECT_GE(nmi(a, truth), 0.0);
    EXPECT_LE(nmi(a, truth), 1.0);
  }
}

TEST(Metrics, IndependentLabelsGiveSmallNmi) {
  std::mt19937_64 rng(54);
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<int> cl(10000), truth(10000);
  for (std::size_t i = 0; i < cl.size(); ++i) {
    cl[i] = pick(rng);
    truth[i] = pick(rng);
  }
  EXPECT_LT(nmi(Assignment(cl, 3), truth), 0.05);
}

TEST(ModelProblem, ShapeLabelsAndMeans) {
  const LabeledDataset ds = model_problem(0.2, 2000, 5);
  ASSERT_EQ(ds.cloud.n(), 6000);
  ASSERT_EQ(ds.cloud.d(), 2);
  ASSERT_TRUE(ds.labels.has_value());
  const Eigen::MatrixXd mu = centroids(ds.cloud, Assignment(*ds.labels, 3));
  Eigen::MatrixXd expected(2, 3);
  expected << 0, 0, 2, 0, 2, 0;
  EXPECT_LT((mu - expected).cwiseAbs().maxCoeff(), 0.02);
}

TEST(ModelProblem, TotalSplitsRemainderFirst) {
  const LabeledDataset ds = model_problem_total(1.0, 11, 5);
  const std::vector<Index> counts = Assignment(*ds.labels, 3).counts();
  EXPECT_EQ(counts, (std::vector<Index>{4, 4, 3}));
  const LabeledDataset again = model_problem_total(1.0, 11, 5);
  EXPECT_EQ(ds.cloud.data(), again.cloud.data());
}
