#include "report.hpp"

#include "csv_io.hpp"
#include "kmg/metrics.hpp"
#include "kmg/objective.hpp"

namespace kmg::cli {

namespace {

nlohmann::ordered_json config_json(const SolverConfig& c) {
  return {{"k", c.k},
          {"epsilon", c.epsilon},
          {"rel_gap", c.rel_gap},
          {"n_min", c.n_min},
          {"symmetry_breaking", c.symmetry_breaking},
          {"centroid_box", c.centroid_box},
          {"local_search", c.local_search},
          {"least_squares_cuts", c.least_squares_cuts},
          {"ls_gate", c.ls_gate},
          {"tight_cuts", c.tight_cuts},
          {"tight_gate", c.tight_gate},
          {"integer_cuts", c.integer_cuts},
          {"branch_vertex_limit", c.branch_vertex_limit},
          {"beta", c.beta},
          {"seed", c.rng_seed},
          {"threads", c.threads},
          {"max_iterations", c.max_iterations}};
}

}  // namespace

nlohmann::ordered_json make_report(const ReportInputs& in) {
  const PointCloud& cloud = *in.cloud;
  const SolveResult& r = *in.result;
  nlohmann::ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool"] = {{"name", "kmglobal"}, {"version", kToolVersion}};
  doc["config"] = config_json(*in.config);
  doc["dataset"] = {{"n", cloud.n()}, {"d", cloud.d()}, {"hash", "fnv1a64:" + hex64(dataset_hash(cloud))}};

  nlohmann::ordered_json res;
  res["status"] = r.certified() ? "certified" : "uncertified";
  res["stop_reason"] = r.stop_reason;
  res["objective"] = r.best_objective;
  res["lower_bound"] = r.lower_bound;
  res["relative_gap"] = r.relative_gap;
  res["iterations"] = r.iterations;
  res["cuts_added"] = r.cuts_added;
  res["constraints"] = r.constraints;
  res["peak_vertices"] = r.peak_vertices;
  res["cumulative_vertices"] = r.cumulative_vertices;
  res["branches"] = r.branches;
  if (r.best_assignment.n() > 0) {
    res["labels"] = r.best_assignment.labels();
    const Eigen::MatrixXd c = centroids(cloud, r.best_assignment);
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (Index j = 0; j < c.cols(); ++j) cs.push_back(std::vector<double>(c.col(j).data(), c.col(j).data() + c.rows()));
    res["centroids"] = std::move(cs);
  }
  doc["result"] = std::move(res);

  if (in.baseline) {
    doc["baseline"] = {{"method", "kmeans++ seeded Lloyd"},
                       {"restarts", in.baseline->restarts},
                       {"best_objective", in.baseline->best.objective},
                       {"mean_objective", in.baseline->mean_objective}};
  }
  if (in.labels && r.best_assignment.n() > 0) {
    doc["metrics"] = {{"purity", purity(r.best_assignment, *in.labels)},
                      {"nmi", nmi(r.best_assignment, *in.labels)},
                      {"nmi_normalization", "arithmetic"}};
  }
  nlohmann::ordered_json env = {{"version", kToolVersion}, {"threads", in.config->threads}};
  if (in.timing) env["wall_time_seconds"] = r.wall_time;
  doc["environment"] = std::move(env);
  return doc;
}

}  // namespace kmg::cli
