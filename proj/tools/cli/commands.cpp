#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bench.hpp"
#include "csv_io.hpp"
#include "kmg/baselines.hpp"
#include "kmg/model_problem.hpp"
#include "report.hpp"

namespace kmg::cli {

namespace {

struct SolveArgs {
  std::string input;
  std::string labels;
  int k = 0;
  double epsilon = 0.0;
  double rel_gap = 1e-4;
  long n_min = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  std::size_t max_vertices = 500000;
  bool no_symmetry = false;
  bool no_box = false;
  double ls_gate = 1.0;
  double tight_gate = 0.01;
  long max_iterations = 1000000;
  double time_limit = 0.0;
  std::string trace;
  std::string out;
  int restarts = 10;
  bool timing = false;
};

struct GenerateArgs {
  double sigma = 0.0;
  long n = 150;
  std::uint64_t seed = 0;
  std::string out;
  std::string labels;
};

struct BenchArgs {
  std::string suite;
  std::uint64_t seed = 3;
  long n = 0;
  bool dry_run = false;
  std::string csv;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const PointCloud cloud = read_points_file(a.input);
  std::optional<std::vector<int>> labels;
  if (!a.labels.empty()) {
    labels = read_labels_file(a.labels);
    if (static_cast<Index>(labels->size()) != cloud.n()) {
      throw std::runtime_error("label file has " + std::to_string(labels->size()) + " rows, expected " +
                               std::to_string(cloud.n()));
    }
  }
  if (a.k > cloud.n()) throw std::invalid_argument("k exceeds the number of points");

  SolverConfig cfg;
  cfg.k = a.k;
  cfg.epsilon = a.epsilon;
  cfg.rel_gap = a.rel_gap;
  cfg.n_min = a.n_min;
  cfg.rng_seed = a.seed;
  cfg.threads = a.threads;
  cfg.branch_vertex_limit = a.max_vertices;
  cfg.symmetry_breaking = !a.no_symmetry;
  cfg.centroid_box = !a.no_box;
  cfg.ls_gate = a.ls_gate;
  cfg.tight_gate = a.tight_gate;
  cfg.max_iterations = a.max_iterations;
  cfg.time_limit_seconds = a.time_limit;
  const SolveResult result = solve(cloud, cfg);

  ReportInputs in;
  in.cloud = &cloud;
  in.config = &cfg;
  in.result = &result;
  in.labels = labels;
  in.timing = a.timing;
  if (a.restarts > 0) in.baseline = kmeanspp_restarts(cloud, a.k, a.restarts, a.seed);
  const std::string doc = make_report(in).dump(2) + "\n";
  if (a.out.empty()) {
    out << doc;
  } else {
    auto f = open_out(a.out);
    f << doc;
  }
  if (!a.trace.empty()) {
    auto f = open_out(a.trace);
    result.trace.write_csv(f);
  }
  if (!result.certified()) err << "warning: result is UNCERTIFIED (" << result.stop_reason << ")\n";
  return result.certified() ? kExitCertified : kExitUncertified;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const LabeledDataset ds = model_problem_total(a.sigma, a.n, a.seed);
  if (a.out.empty()) {
    write_points(out, ds.cloud);
  } else {
    auto f = open_out(a.out);
    write_points(f, ds.cloud);
  }
  if (!a.labels.empty()) {
    auto f = open_out(a.labels);
    write_labels(f, *ds.labels);
  }
  return kExitCertified;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const std::vector<BenchRun> runs = plan_suite(a.suite, a.seed, a.n);
  if (a.dry_run) {
    for (const BenchRun& r : runs) {
      out << r.suite << ": " << r.label << " n=" << r.n << " k=" << r.config.k << " sigma=" << r.sigma
          << " seed=" << r.seed << "\n";
    }
    return kExitCertified;
  }
  std::vector<BenchRow> rows;
  for (const BenchRun& r : runs) rows.push_back(execute(r));
  write_bench_table(out, rows);
  if (!a.csv.empty()) {
    auto f = open_out(a.csv);
    write_bench_csv(f, rows);
  }
  return kExitCertified;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Globally optimal k-means with certified bounds", "kmglobal"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a k-means instance to certified optimality");
  solve_cmd->add_option("--input", sa.input, "Points CSV")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--labels", sa.labels, "Ground-truth labels, one per row")->check(CLI::ExistingFile);
  solve_cmd->add_option("--k", sa.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
  solve_cmd->add_option("--epsilon", sa.epsilon, "Absolute gap tolerance")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--rel-gap", sa.rel_gap, "Relative gap tolerance")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--n-min", sa.n_min, "Minimum cluster size")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--seed", sa.seed, "Seed for the baseline restarts");
  solve_cmd->add_option("--threads", sa.threads, "Worker threads")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-vertices", sa.max_vertices, "Vertex count that triggers branching")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--no-symmetry", sa.no_symmetry, "Disable symmetry breaking");
  solve_cmd->add_flag("--no-box", sa.no_box, "Disable centroid box cuts");
  solve_cmd->add_option("--ls-gate", sa.ls_gate, "Least-squares cuts while relative gap exceeds this");
  solve_cmd->add_option("--tight-gate", sa.tight_gate, "Tight cuts while relative gap is below this");
  solve_cmd->add_option("--max-iterations", sa.max_iterations, "Iteration cap")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--time-limit", sa.time_limit, "Wall-clock cap in seconds (0 = none)")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--trace", sa.trace, "Write the per-iteration trace CSV here");
  solve_cmd->add_option("--out", sa.out, "Write the JSON report here (default stdout)");
  solve_cmd->add_option("--restarts", sa.restarts, "k-means++ baseline restarts (0 = skip)")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_flag("--timing", sa.timing, "Include wall time in the report");

  GenerateArgs ga;
  auto* gen_cmd = app.add_subcommand("generate", "Sample the three-Gaussian model problem");
  gen_cmd->add_option("--sigma", ga.sigma, "Standard deviation")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--n", ga.n, "Total number of points")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", ga.seed, "RNG seed");
  gen_cmd->add_option("--out", ga.out, "Points CSV (default stdout)");
  gen_cmd->add_option("--labels", ga.labels, "Labels file");

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment suite");
  bench_cmd->add_option("--suite", ba.suite, "ablation | separability | scaling-lite")
      ->required()
      ->check(CLI::IsMember({"ablation", "separability", "scaling-lite"}));
  bench_cmd->add_option("--seed", ba.seed, "Dataset seed");
  bench_cmd->add_option("--n", ba.n, "Override the suite's point count")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--dry-run", ba.dry_run, "Print the planned runs only");
  bench_cmd->add_option("--csv", ba.csv, "Write results CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitCertified;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitCertified;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitCertified;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (*solve_cmd) return cmd_solve(sa, out, err);
    if (*gen_cmd) return cmd_generate(ga, out);
    if (*bench_cmd) return cmd_bench(ba, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace kmg::cli
