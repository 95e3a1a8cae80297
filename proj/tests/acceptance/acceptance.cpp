#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "bench.hpp"
#include "commands.hpp"
#include "kmg/accelerators.hpp"
#include "kmg/assignment_lp.hpp"
#include "kmg/baselines.hpp"
#include "kmg/model_problem.hpp"
#include "kmg/objective.hpp"
#include "kmg/relaxation.hpp"
#include "kmg/solver.hpp"
#include "oracles.hpp"

using namespace kmg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::VectorXd flat(const Eigen::MatrixXd& m) { return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()); }

PointCloud random_cloud(std::mt19937_64& rng, Index n, Index d) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(d, n);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = 2.0 * g(rng);
  return PointCloud(x);
}

Eigen::MatrixXd gaussian(std::mt19937_64& rng, Index r, Index c) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

bool trace_monotone(const SolveResult& r) {
  for (std::size_t t = 1; t < r.trace.rows.size(); ++t) {
    if (r.trace.rows[t].lower < r.trace.rows[t - 1].lower) return false;
    if (r.trace.rows[t].upper > r.trace.rows[t - 1].upper) return false;
  }
  return true;
}

// Shared by the first two criteria.
struct SmallSuite {
  int instances = 0;
  int value_mismatch = 0;
  int gap_too_large = 0;
  int uncertified = 0;
  int non_monotone = 0;
  int bracket_violations = 0;
  double worst_rel = 0.0;
  double worst_gap = 0.0;
  double seconds = 0.0;
};

SmallSuite run_small_suite() {
  SmallSuite s;
  std::mt19937_64 rng(2024);
  const auto start = std::chrono::steady_clock::now();
  for (int t = 0; t < 50; ++t) {
    const Index n = 4 + t % 7;
    const int k = 2 + t % 2;
    const Index d = 1 + (t / 2) % 2;
    const Index n_min = (t % 5 == 0 && n >= 2 * k) ? 2 : 1;
    const PointCloud cloud = random_cloud(rng, n, d);
    SolverConfig cfg;
    cfg.k = k;
    cfg.n_min = n_min;
    cfg.epsilon = 1e-9;
    cfg.rel_gap = 0.0;
    const SolveResult r = solve(cloud, cfg);
    const double truth = brute_force(cloud, k, n_min).objective;
    ++s.instances;
    const double rel = std::abs(r.best_objective - truth) / std::max(1.0, truth);
    s.worst_rel = std::max(s.worst_rel, rel);
    if (rel > 1e-9) ++s.value_mismatch;
    const double gap = r.best_objective - r.lower_bound;
    s.worst_gap = std::max(s.worst_gap, gap);
    if (gap > 1e-9) ++s.gap_too_large;
    if (!r.certified()) ++s.uncertified;
    if (!trace_monotone(r)) ++s.non_monotone;
    const double tol = 1e-9 * std::max(1.0, truth);
    for (const TraceRow& row : r.trace.rows) {
      if (row.lower > truth + tol || row.upper < truth - tol) ++s.bracket_violations;
    }
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

Outcome ac1(const SmallSuite& s) {
  // n_min = 2 appears on every fifth instance.
  const bool ok = s.value_mismatch == 0 && s.gap_too_large == 0 && s.uncertified == 0 && s.seconds < 120.0;
  return {ok, fmt("%d instances, worst rel error %.2e, worst gap %.2e, %d uncertified, %.1fs", s.instances,
                  s.worst_rel, s.worst_gap, s.uncertified, s.seconds)};
}

Outcome ac2(const SmallSuite& s, const std::vector<const SolveResult*>& others) {
  int non_monotone = s.non_monotone;
  for (const SolveResult* r : others) non_monotone += trace_monotone(*r) ? 0 : 1;
  const bool ok = non_monotone == 0 && s.bracket_violations == 0;
  return {ok, fmt("%zu traces checked, %d non-monotone, %d bracket violations", s.instances + others.size(),
                  non_monotone, s.bracket_violations)};
}

Outcome ac3(SolveResult& keep) {
  const LabeledDataset ds = model_problem_total(1.0, 50, 1);
  SolverConfig cfg;
  cfg.k = 3;
  cfg.rel_gap = 1e-4;
  const auto start = std::chrono::steady_clock::now();
  keep = solve(ds.cloud, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const RestartSummary base = kmeanspp_restarts(ds.cloud, 3, 100, 1);
  const double rel = (keep.best_objective - keep.lower_bound) / std::max(std::abs(keep.best_objective), 1.0);
  const bool ok = keep.certified() && rel <= 1e-4 && secs < 600.0 &&
                  keep.best_objective <= base.best.objective + 1e-9 * base.best.objective && keep.iterations < 5000;
  return {ok, fmt("objective %.6f vs best restart %.6f, rel gap %.2e, %ld iterations, %zu constraints, %.2fs",
                  keep.best_objective, base.best.objective, rel, keep.iterations, keep.constraints, secs)};
}

Outcome ac4(std::vector<SolveResult>& keep) {
  std::map<std::string, long> it;
  bool certified = true;
  for (const cli::BenchRun& run : cli::plan_suite("separability", 3)) {
    cli::BenchRow row = cli::execute(run);
    it[run.label] = row.result.iterations;
    certified = certified && row.result.certified();
    keep.push_back(std::move(row.result));
  }
  const long a = it["sigma=0.2"], b = it["sigma=0.5"], c = it["sigma=1"];
  return {certified && a < b && b < c, fmt("iterations sigma=0.2: %ld, sigma=0.5: %ld, sigma=1: %ld", a, b, c)};
}

Outcome ac5(std::vector<SolveResult>& keep) {
  std::map<std::string, SolveResult> rows;
  for (const cli::BenchRun& run : cli::plan_suite("ablation", 3)) {
    if (run.label != "Original" && run.label != "SB" && run.label != "SB+CC") continue;
    rows[run.label] = cli::execute(run).result;
  }
  const SolveResult& o = rows["Original"];
  const SolveResult& sb = rows["SB"];
  const SolveResult& cc = rows["SB+CC"];
  const bool ok = o.certified() && sb.certified() && cc.certified() && sb.iterations < o.iterations &&
                  cc.constraints < sb.constraints;
  for (auto& [label, r] : rows) keep.push_back(r);
  return {ok, fmt("iterations Original %ld, SB %ld; constraints SB %zu, SB+CC %zu", o.iterations, sb.iterations,
                  sb.constraints, cc.constraints)};
}

Outcome ac6() {
  std::mt19937_64 rng(66);
  const int total = 10000;
  const int per_cloud = 100;
  const int samples = 500;
  const char* names[] = {"gradient", "box", "symmetry", "integer", "least-squares", "tight"};
  std::map<std::string, int> made, failed;

  PointCloud cloud = random_cloud(rng, 10, 2);
  int k = 3;
  std::vector<Eigen::VectorXd> images, sorted_images, sorted_reduced;
  std::optional<MarginalChart> chart;
  std::vector<HalfSpace> box, sym, integer;

  auto refresh = [&](int c) {
    const Index n = 8 + c % 5;
    k = 2 + c % 2;
    const Index d = 1 + c % 3;
    cloud = random_cloud(rng, n, d);
    images.clear();
    sorted_images.clear();
    sorted_reduced.clear();
    const BoundingSimplex bs = init_simplex(cloud, k, 1);
    chart.emplace(cloud, k, bs);
    for (int s = 0; s < samples; ++s) {
      const Eigen::MatrixXd z = oracle::image(cloud.data(), oracle::random_labels(n, k, 1, rng), k);
      images.push_back(flat(z));
      std::vector<Index> order(static_cast<std::size_t>(k));
      std::iota(order.begin(), order.end(), Index{0});
      std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return z.col(a).sum() < z.col(b).sum(); });
      Eigen::MatrixXd zs(z.rows(), k);
      for (Index j = 0; j < k; ++j) zs.col(j) = z.col(order[static_cast<std::size_t>(j)]);
      sorted_images.push_back(flat(zs));
      sorted_reduced.push_back(chart->to_reduced(zs));
    }
    box = centroid_box_cuts(cloud, k);
    sym = symmetry_cuts(k, d);
    // Integer cuts from a symmetry-reduced relaxation refined by a short
    // cutting-plane run; they hold for the sorted representatives.
    integer.clear();
    Polytope p = chart->initial_polytope();
    const auto masses = chart->mass_functionals();
    const double c0 = cloud.c0();
    for (const auto* group : {&sym, &box}) {
      for (const HalfSpace& hs : *group) {
        if (auto h = chart->project(hs)) p.add_cut(*h);
      }
    }
    for (int g = 0; g < 30; ++g) {
      const VertexMin vm = min_vertex(p, [&](const auto& y) { return concave_objective(c0, chart->to_full(y)); });
      const GradientCut gc = cut_from_gradient(cloud, gradient(chart->to_full(vm.vertex)), 1);
      const auto h = chart->project(gc.halfspace);
      if (!h || p.add_cut(*h) == CutOutcome::redundant) break;
      for (const HalfSpace& ic : integer_prune(p, masses)) integer.push_back(ic);
    }
  };

  auto valid_for = [](const HalfSpace& h, const std::vector<Eigen::VectorXd>& pts) {
    for (const Eigen::VectorXd& z : pts) {
      const double scale = std::max({1.0, std::abs(h.offset), std::abs(h.normal.dot(z))});
      if (h.slack(z) < -1e-9 * scale) return false;
    }
    return true;
  };

  int produced = 0;
  int clouds = 0;
  for (int slot = 0; produced < total; ++slot) {
    if (slot % per_cloud == 0) refresh(clouds++);
    const int kind = slot % 6;
    const Index rows = cloud.d() + 1;
    std::optional<HalfSpace> h;
    const std::vector<Eigen::VectorXd>* pts = &images;
    Eigen::MatrixXd zr = gaussian(rng, rows, k);
    zr.row(rows - 1) = (zr.row(rows - 1).array().abs() * 3.0 + 0.5).matrix();
    switch (kind) {
      case 0:
        h = cut_from_gradient(cloud, gradient(zr), 1).halfspace;
        break;
      case 1:
        h = box[static_cast<std::size_t>(slot / 6) % box.size()];
        break;
      case 2:
        h = sym[static_cast<std::size_t>(slot / 6) % sym.size()];
        pts = &sorted_images;
        break;
      case 3:
        if (!integer.empty()) {
          h = integer[static_cast<std::size_t>(slot / 6) % integer.size()];
          pts = &sorted_reduced;
        }
        break;
      case 4: {
        const Eigen::MatrixXd base = Eigen::Map<const Eigen::MatrixXd>(images[static_cast<std::size_t>(slot) % samples].data(), rows, k);
        h = ls_project(cloud, base + 3.0 * gaussian(rng, rows, k), 1, 0.0).cut;
        break;
      }
      case 5: {
        const GradientCut gc = cut_from_gradient(cloud, gradient(zr), 1);
        if (gc.basis) {
          const auto normals = tight_cuts(cloud, *gc.basis, gradient(zr), {0.1, 2});
          if (!normals.empty()) h = cut_from_gradient(cloud, normals.back(), 1).halfspace;
        }
        break;
      }
    }
    if (!h) continue;
    ++produced;
    ++made[names[kind]];
    if (!valid_for(*h, *pts)) ++failed[names[kind]];
  }
  int bad = 0;
  std::string detail = fmt("%d cuts x %d assignments;", produced, samples);
  for (const char* nm : names) {
    detail += fmt(" %s %d/%d", nm, made[nm] - failed[nm], made[nm]);
    bad += failed[nm];
  }
  bool all_kinds = true;
  for (const char* nm : names) all_kinds = all_kinds && made[nm] > 0;
  return {bad == 0 && all_kinds, detail};
}

Outcome ac7() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int mismatches = 0;
  std::size_t checked = 0;
  for (int t = 0; t < 100; ++t) {
    const Index dim = 2 + t % 3;
    Polytope p = Polytope::box(Eigen::VectorXd::Constant(dim, -1.0), Eigen::VectorXd::Constant(dim, 1.0));
    const int cuts = 3 + t % 11;
    for (int c = 0; c < cuts; ++c) {
      Eigen::VectorXd a(dim);
      for (Index i = 0; i < dim; ++i) a(i) = u(rng);
      if (a.norm() < 1e-3) continue;
      HalfSpace h{a, 0.5 * u(rng) + 0.3 * a.norm(), CutKind::gradient};
      try {
        p.add_cut(h);
      } catch (const InfeasibleRegion&) {
        break;
      }
    }
    Eigen::MatrixXd a(static_cast<Index>(p.num_halfspaces()), dim);
    Eigen::VectorXd b(a.rows());
    for (std::size_t i = 0; i < p.num_halfspaces(); ++i) {
      a.row(static_cast<Index>(i)) = p.halfspaces()[i].normal.transpose();
      b(static_cast<Index>(i)) = p.halfspaces()[i].offset;
    }
    const auto truth = oracle::enumerate_vertices(a, b);
    checked += truth.size();
    if (truth.size() != p.num_vertices()) {
      ++mismatches;
      continue;
    }
    for (std::size_t v = 0; v < p.num_vertices(); ++v) {
      bool found = false;
      for (const auto& w : truth) found = found || (w - p.vertex(v)).norm() <= 1e-7;
      if (!found) {
        ++mismatches;
        break;
      }
    }
  }
  return {mismatches == 0, fmt("100 polytopes, %zu oracle vertices, %d mismatched", checked, mismatches)};
}

Outcome ac8() {
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> coord(-5.0, 5.0), mass(1.0, 10.0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Index d = 1 + t % 3;
    const Index k = 2 + t % 3;
    Eigen::MatrixXd z(d + 1, k);
    for (Index j = 0; j < k; ++j) {
      for (Index i = 0; i < d; ++i) z(i, j) = coord(rng);
      z(d, j) = mass(rng);
    }
    const Eigen::MatrixXd g = gradient(z);
    for (Index e = 0; e < z.size(); ++e) {
      Eigen::MatrixXd zp = z, zm = z;
      zp.data()[e] += 1e-5;
      zm.data()[e] -= 1e-5;
      const double fd = (concave_objective(0.0, zp) - concave_objective(0.0, zm)) / 2e-5;
      worst = std::max(worst, std::abs(fd - g.data()[e]) / std::max(1.0, std::abs(g.data()[e])));
    }
  }
  return {worst <= 1e-6, fmt("100 points, worst relative deviation %.2e", worst)};
}

Outcome ac9() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  int wrong = 0, fractional = 0;
  for (int t = 0; t < 200; ++t) {
    const Index n = 2 + t % 7;
    const Index k = std::min<Index>(1 + t % 3, n);
    const Index n_min = std::max<Index>(1, std::min<Index>(1 + t % 2, n / k));
    Eigen::MatrixXd w(n, k);
    for (Index i = 0; i < w.size(); ++i) w.data()[i] = t % 4 == 0 ? std::round(3 * g(rng)) : g(rng);
    const LinearMinResult r = linear_min(w, n_min);
    double best = std::numeric_limits<double>::infinity();
    oracle::for_each_assignment(n, static_cast<int>(k), n_min, [&](const std::vector<int>& l) {
      double v = 0.0;
      for (Index i = 0; i < n; ++i) v += w(i, l[static_cast<std::size_t>(i)]);
      best = std::min(best, v);
    });
    if (std::abs(r.value - best) > 1e-9 * std::max(1.0, std::abs(best))) ++wrong;
    const Eigen::MatrixXd gm = r.assignment.to_matrix();
    const bool integral = (gm.array() * (1.0 - gm.array()) == 0.0).all() && (gm.rowwise().sum().array() == 1.0).all() &&
                          r.assignment.satisfies_min_size(n_min);
    if (!integral) ++fractional;
  }
  return {wrong == 0 && fractional == 0, fmt("200 cost matrices, %d value mismatches, %d non-integral", wrong, fractional)};
}

Outcome ac10() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "kmg_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto call = [](std::vector<std::string> args) {
    args.insert(args.begin(), "kmglobal");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  };
  const std::string pts = (dir / "p.csv").string(), lab = (dir / "l.csv").string();
  const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
  int rc = call({"generate", "--sigma", "0.5", "--n", "60", "--seed", "10", "--out", pts, "--labels", lab});
  rc |= call({"solve", "--input", pts, "--labels", lab, "--k", "3", "--seed", "10", "--threads", "1", "--out", a});
  rc |= call({"solve", "--input", pts, "--labels", lab, "--k", "3", "--seed", "10", "--threads", "1", "--out", b});
  auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
  };
  const std::string ra = slurp(a), rb = slurp(b);
  fs::remove_all(dir);
  return {rc == 0 && !ra.empty() && ra == rb, fmt("report size %zu bytes, identical: %s", ra.size(), ra == rb ? "yes" : "no")};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const char* title, const Outcome& o) {
    std::printf("[%s] %s %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  const SmallSuite small = run_small_suite();
  SolveResult model;
  std::vector<SolveResult> separability, ablation;
  report("AC1", "oracle equivalence", ac1(small));
  const Outcome o3 = ac3(model);
  const Outcome o4 = ac4(separability);
  const Outcome o5 = ac5(ablation);
  std::vector<const SolveResult*> others{&model};
  for (const auto& r : separability) others.push_back(&r);
  for (const auto& r : ablation) others.push_back(&r);
  report("AC2", "bound soundness and monotonicity", ac2(small, others));
  report("AC3", "model problem n=50", o3);
  report("AC4", "separability trend", o4);
  report("AC5", "accelerator ablation", o5);
  report("AC6", "cut validity fuzz", ac6());
  report("AC7", "polytope engine oracle", ac7());
  report("AC8", "gradient correctness", ac8());
  report("AC9", "transportation LP", ac9());
  report("AC10", "determinism", ac10());
  return failures == 0 ? 0 : 1;
}
