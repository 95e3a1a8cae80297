#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kmg/baselines.hpp"
#include "kmg/solver.hpp"

namespace kmg::cli {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

struct ReportInputs {
  const PointCloud* cloud = nullptr;
  const SolverConfig* config = nullptr;
  const SolveResult* result = nullptr;
  std::optional<RestartSummary> baseline;
  std::optional<std::vector<int>> labels;
  bool timing = false;
};

nlohmann::ordered_json make_report(const ReportInputs& in);

}  // namespace kmg::cli
