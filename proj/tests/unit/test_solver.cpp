#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "kmg/model_problem.hpp"
#include "kmg/objective.hpp"
#include "kmg/solver.hpp"
#include "oracles.hpp"

using namespace kmg;

namespace {

PointCloud random_cloud(std::mt19937_64& rng, Index n, Index d) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(d, n);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = 2.0 * g(rng);
  return PointCloud(x);
}

SolverConfig exact(int k, Index n_min = 1) {
  SolverConfig c;
  c.k = k;
  c.n_min = n_min;
  c.epsilon = 1e-9;
  c.rel_gap = 0.0;
  return c;
}

}  // namespace

TEST(Solve, FourPointExample) {
  const PointCloud cloud = PointCloud::from_rows({{0}, {1}, {10}, {11}});
  const SolveResult r = solve(cloud, exact(2));
  ASSERT_TRUE(r.certified());
  EXPECT_NEAR(r.best_objective, 1.0, 1e-12);
  EXPECT_LE(r.lower_bound, 1.0 + 1e-12);
  EXPECT_GE(r.lower_bound, 1.0 - 1e-8);
  const auto& l = r.best_assignment.labels();
  EXPECT_EQ(l[0], l[1]);
  EXPECT_EQ(l[2], l[3]);
  EXPECT_NE(l[0], l[2]);
}

TEST(Solve, EveryPointItsOwnCluster) {
  const PointCloud cloud = PointCloud::from_rows({{0, 1}, {4, 2}, {-3, 5}});
  const SolveResult r = solve(cloud, exact(3));
  ASSERT_TRUE(r.certified());
  EXPECT_NEAR(r.best_objective, 0.0, 1e-12);
}

TEST(Solve, SingleClusterIsTrivial) {
  const PointCloud cloud = PointCloud::from_rows({{0}, {2}, {4}});
  const SolveResult r = solve(cloud, exact(1));
  ASSERT_TRUE(r.certified());
  EXPECT_DOUBLE_EQ(r.best_objective, 8.0);
  EXPECT_DOUBLE_EQ(r.lower_bound, 8.0);
}

TEST(Solve, RejectsInvalidConfigs) {
  const PointCloud cloud = PointCloud::from_rows({{0}, {2}, {4}});
  EXPECT_THROW(solve(cloud, exact(4)), std::invalid_argument);
  EXPECT_THROW(solve(cloud, exact(2, 2)), std::invalid_argument);
  SolverConfig c = exact(2);
  c.epsilon = 0.0;
  EXPECT_THROW(solve(cloud, c), std::invalid_argument);
  c = exact(2);
  c.threads = 0;
  EXPECT_THROW(solve(cloud, c), std::invalid_argument);
}

TEST(Solve, SoundAgainstExhaustiveSearch) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 5 + trial % 6;
    const int k = 2 + trial % 2;
    const Index d = 1 + trial % 2;
    const Index n_min = trial % 5 == 4 ? 2 : 1;
    const PointCloud cloud = random_cloud(rng, n, d);
    const double truth = oracle::exhaustive_kmeans(cloud.data(), k, n_min);
    const SolveResult r = solve(cloud, exact(k, n_min));
    ASSERT_TRUE(r.certified()) << "trial " << trial;
    const double tol = 1e-7 * std::max(1.0, truth);
    EXPECT_NEAR(r.best_objective, truth, tol) << "trial " << trial;
    EXPECT_LE(r.lower_bound, truth + tol);
    EXPECT_TRUE(r.best_assignment.satisfies_min_size(n_min));
    EXPECT_NEAR(oracle::sse(cloud.data(), r.best_assignment.labels(), k), r.best_objective, 1e-9);
  }
}

TEST(Solve, TraceBoundsAreMonotone) {
  const LabeledDataset ds = model_problem_total(0.5, 40, 7);
  SolverConfig c;
  c.k = 3;
  const SolveResult r = solve(ds.cloud, c);
  ASSERT_FALSE(r.trace.rows.empty());
  for (std::size_t t = 0; t < r.trace.rows.size(); ++t) {
    const TraceRow& row = r.trace.rows[t];
    EXPECT_LE(row.lower, row.upper + 1e-9);
    if (t > 0) {
      EXPECT_GE(row.lower, r.trace.rows[t - 1].lower);
      EXPECT_LE(row.upper, r.trace.rows[t - 1].upper);
    }
  }
  EXPECT_DOUBLE_EQ(r.trace.rows.back().upper, r.best_objective);
  std::ostringstream csv;
  r.trace.write_csv(csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "iter,node,lower,upper,gap,cut_kind,vertices");
}

TEST(Solve, Deterministic) {
  const LabeledDataset ds = model_problem_total(1.0, 30, 11);
  SolverConfig c;
  c.k = 3;
  const SolveResult a = solve(ds.cloud, c);
  const SolveResult b = solve(ds.cloud, c);
  EXPECT_EQ(a.best_assignment, b.best_assignment);
  EXPECT_EQ(a.best_objective, b.best_objective);
  EXPECT_EQ(a.lower_bound, b.lower_bound);
  EXPECT_EQ(a.iterations, b.iterations);
  std::ostringstream ta, tb;
  a.trace.write_csv(ta);
  b.trace.write_csv(tb);
  EXPECT_EQ(ta.str(), tb.str());
}

TEST(Solve, AcceleratorsDoNotChangeTheOptimum) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud cloud = random_cloud(rng, 8 + trial % 5, 2);
    SolverConfig on = exact(2 + trial % 2);
    SolverConfig off = on;
    off.symmetry_breaking = false;
    off.centroid_box = false;
    const SolveResult a = solve(cloud, on);
    const SolveResult b = solve(cloud, off);
    ASSERT_TRUE(a.certified() && b.certified());
    EXPECT_NEAR(a.best_objective, b.best_objective, 1e-7 * std::max(1.0, a.best_objective)) << "trial " << trial;
  }
}

TEST(Solve, ThreadsDoNotChangeTheResult) {
  const LabeledDataset ds = model_problem_total(1.0, 30, 13);
  SolverConfig c;
  c.k = 3;
  const SolveResult a = solve(ds.cloud, c);
  c.threads = 4;
  const SolveResult b = solve(ds.cloud, c);
  EXPECT_EQ(a.best_assignment, b.best_assignment);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Solve, IterationCapGivesUncertifiedBounds) {
  const LabeledDataset ds = model_problem_total(1.0, 60, 5);
  SolverConfig c;
  c.k = 3;
  c.max_iterations = 3;
  const SolveResult r = solve(ds.cloud, c);
  EXPECT_FALSE(r.certified());
  EXPECT_EQ(r.stop_reason, "max_iterations");
  EXPECT_LE(r.lower_bound, r.best_objective);
  EXPECT_NEAR(kmeans_objective(ds.cloud, r.best_assignment), r.best_objective, 1e-9);
}

TEST(Solve, RelativeGapStopsEarly) {
  const LabeledDataset ds = model_problem_total(1.0, 40, 9);
  SolverConfig loose;
  loose.k = 3;
  loose.rel_gap = 0.05;
  SolverConfig tight = loose;
  tight.rel_gap = 1e-6;
  const SolveResult a = solve(ds.cloud, loose);
  const SolveResult b = solve(ds.cloud, tight);
  ASSERT_TRUE(a.certified() && b.certified());
  EXPECT_LE(a.iterations, b.iterations);
  EXPECT_LE((a.best_objective - a.lower_bound) / a.best_objective, 0.05 + 1e-12);
  EXPECT_LE(a.lower_bound, b.best_objective + 1e-9);
}
