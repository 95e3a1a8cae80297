#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kmg/point_cloud.hpp"

namespace kmg {

struct SolverConfig {
  int k = 2;
  double epsilon = 0.0;   // absolute gap
  double rel_gap = 1e-4;  // (U - L) / max(|U|, 1)
  Index n_min = 1;

  bool symmetry_breaking = true;
  bool centroid_box = true;
  bool local_search = true;
  bool least_squares_cuts = true;
  double ls_gate = 1.0;  // least-squares cuts while relative gap > ls_gate
  bool tight_cuts = true;
  double tight_gate = 0.01;  // tight and local-optimum cuts while relative gap < tight_gate
  double tight_alpha = 0.1;
  int tight_count = 0;  // 0 selects 2k
  bool integer_cuts = true;

  std::size_t branch_vertex_limit = 500000;
  double beta = 1e-6;
  std::uint64_t rng_seed = 0;
  int threads = 1;

  long max_iterations = 1000000;
  std::size_t max_total_vertices = 20000000;
  double time_limit_seconds = 0.0;  // 0 disables

  /// Throws std::invalid_argument on out-of-range settings.
  void validate(Index n) const;
};

struct TraceRow {
  long iter = 0;
  int node = 0;
  double lower = 0.0;
  double upper = 0.0;
  double gap = 0.0;
  std::string cut_kind;  // '+'-joined kinds applied this iteration
  std::size_t vertices = 0;
};

struct SolveTrace {
  std::vector<TraceRow> rows;
  /// Columns iter,node,lower,upper,gap,cut_kind,vertices.
  void write_csv(std::ostream& out) const;
};

enum class SolveStatus { certified, uncertified };

struct SolveResult {
  Assignment best_assignment;
  double best_objective = 0.0;
  double lower_bound = 0.0;
  double relative_gap = 0.0;
  SolveStatus status = SolveStatus::uncertified;
  std::string stop_reason;
  long iterations = 0;
  std::size_t cuts_added = 0;
  std::size_t constraints = 0;          // half-spaces of the last processed node
  std::size_t peak_vertices = 0;        // max over iterations of open-node vertices
  std::size_t cumulative_vertices = 0;  // sum over iterations of vertex counts
  int branches = 0;
  double wall_time = 0.0;
  SolveTrace trace;

  bool certified() const { return status == SolveStatus::certified; }
};

/// Cutting-plane outer approximation with spatial branching. Bounds are
/// certified: lower_bound <= optimum <= best_objective.
SolveResult solve(const PointCloud& cloud, const SolverConfig& config);

}  // namespace kmg
