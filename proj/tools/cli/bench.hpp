#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kmg/solver.hpp"

namespace kmg::cli {

struct BenchRun {
  std::string suite;
  std::string label;
  double sigma = 1.0;
  Index n = 0;
  std::uint64_t seed = 0;
  SolverConfig config;
};

struct BenchRow {
  BenchRun run;
  SolveResult result;
  double seconds = 0.0;
};

/// Accelerator set of one ablation row: "Original", "SB", "SB+LS", "SB+CC",
/// "SB+CC+LS" or "scheduled". Throws std::invalid_argument otherwise.
SolverConfig ablation_config(const std::string& row, int k = 3);
const std::vector<std::string>& ablation_rows();

/// Planned runs of a suite ("ablation", "separability", "scaling-lite").
/// n_override > 0 replaces the suite's default sizes.
std::vector<BenchRun> plan_suite(const std::string& suite, std::uint64_t seed, Index n_override = 0);

BenchRow execute(const BenchRun& run);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_bench_table(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace kmg::cli
