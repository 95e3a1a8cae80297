#include <benchmark/benchmark.h>

#include <random>

#include "kmg/assignment_lp.hpp"
#include "kmg/model_problem.hpp"
#include "kmg/polytope.hpp"
#include "kmg/solver.hpp"

using namespace kmg;

static void BM_AddCut(benchmark::State& state) {
  const Index dim = state.range(0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (auto _ : state) {
    Polytope p = Polytope::box(Eigen::VectorXd::Constant(dim, -1.0), Eigen::VectorXd::Constant(dim, 1.0));
    for (int c = 0; c < 40; ++c) {
      Eigen::VectorXd a(dim);
      for (Index i = 0; i < dim; ++i) a(i) = g(rng);
      p.add_cut({a, 0.8 * a.norm(), CutKind::gradient});
    }
    benchmark::DoNotOptimize(p.num_vertices());
  }
}
BENCHMARK(BM_AddCut)->Arg(3)->Arg(4)->Arg(6);

static void BM_LinearMin(benchmark::State& state) {
  const Index n = state.range(0);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Eigen::MatrixXd w(n, 3);
  for (Index i = 0; i < w.size(); ++i) w.data()[i] = g(rng);
  w.col(0).array() -= 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(linear_min(w, n / 4).value);
}
BENCHMARK(BM_LinearMin)->Arg(50)->Arg(500)->Arg(5000);

static void BM_SolveModelProblem(benchmark::State& state) {
  const LabeledDataset ds = model_problem_total(1.0, state.range(0), 1);
  SolverConfig cfg;
  cfg.k = 3;
  for (auto _ : state) benchmark::DoNotOptimize(solve(ds.cloud, cfg).best_objective);
}
BENCHMARK(BM_SolveModelProblem)->Arg(30)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
