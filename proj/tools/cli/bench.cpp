#include "bench.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "kmg/model_problem.hpp"

namespace kmg::cli {

const std::vector<std::string>& ablation_rows() {
  static const std::vector<std::string> rows{"Original", "SB", "SB+LS", "SB+CC", "SB+CC+LS", "scheduled"};
  return rows;
}

SolverConfig ablation_config(const std::string& row, int k) {
  SolverConfig cfg;
  cfg.k = k;
  cfg.rel_gap = 1e-4;
  if (row == "scheduled") return cfg;
  cfg.symmetry_breaking = false;
  cfg.centroid_box = false;
  cfg.least_squares_cuts = false;
  cfg.ls_gate = -1.0;
  cfg.tight_cuts = false;
  cfg.local_search = false;
  cfg.integer_cuts = false;
  if (row == "Original") return cfg;
  cfg.symmetry_breaking = true;
  if (row == "SB") return cfg;
  if (row == "SB+LS") {
    cfg.least_squares_cuts = true;
    return cfg;
  }
  cfg.centroid_box = true;
  if (row == "SB+CC") return cfg;
  if (row == "SB+CC+LS") {
    cfg.least_squares_cuts = true;
    return cfg;
  }
  throw std::invalid_argument("unknown ablation row: " + row);
}

std::vector<BenchRun> plan_suite(const std::string& suite, std::uint64_t seed, Index n_override) {
  std::vector<BenchRun> runs;
  if (suite == "ablation") {
    for (const std::string& row : ablation_rows()) {
      runs.push_back({suite, row, 1.0, n_override > 0 ? n_override : 50, seed, ablation_config(row)});
    }
  } else if (suite == "separability") {
    for (double sigma : {1.0, 0.5, 0.2}) {
      char label[32];
      std::snprintf(label, sizeof label, "sigma=%g", sigma);
      runs.push_back({suite, label, sigma, n_override > 0 ? n_override : 500, seed, ablation_config("scheduled")});
    }
  } else if (suite == "scaling-lite") {
    const std::vector<Index> sizes = n_override > 0 ? std::vector<Index>{n_override} : std::vector<Index>{50, 200, 500};
    for (Index n : sizes) {
      runs.push_back({suite, "n=" + std::to_string(n), 1.0, n, seed, ablation_config("scheduled")});
    }
  } else {
    throw std::invalid_argument("unknown suite: " + suite);
  }
  return runs;
}

BenchRow execute(const BenchRun& run) {
  const LabeledDataset ds = model_problem_total(run.sigma, run.n, run.seed);
  const auto start = std::chrono::steady_clock::now();
  BenchRow row{run, solve(ds.cloud, run.config), 0.0};
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "suite,label,n,k,sigma,rel_gap,status,iterations,constraints,peak_vertices,cumulative_vertices,branches,"
         "objective,lower_bound,seconds\n";
  char buf[512];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%lld,%d,%g,%g,%s,%ld,%zu,%zu,%zu,%d,%.12g,%.12g,%.3f\n", r.run.suite.c_str(),
                  r.run.label.c_str(), static_cast<long long>(r.run.n), r.run.config.k, r.run.sigma,
                  r.run.config.rel_gap, r.result.certified() ? "certified" : "uncertified", r.result.iterations,
                  r.result.constraints, r.result.peak_vertices, r.result.cumulative_vertices, r.result.branches,
                  r.result.best_objective, r.result.lower_bound, r.seconds);
    out << buf;
  }
}

void write_bench_table(std::ostream& out, const std::vector<BenchRow>& rows) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s %6s %8s %8s %12s %8s %14s %9s\n", "config", "n", "iters", "constr",
                "peak_vert", "branches", "objective", "time[s]");
  out << buf;
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%-14s %6lld %8ld %8zu %12zu %8d %14.6f %9.2f%s\n", r.run.label.c_str(),
                  static_cast<long long>(r.run.n), r.result.iterations, r.result.constraints, r.result.peak_vertices,
                  r.result.branches, r.result.best_objective, r.seconds, r.result.certified() ? "" : "  UNCERTIFIED");
    out << buf;
  }
}

}  // namespace kmg::cli
