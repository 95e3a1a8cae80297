#include "kmg/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "kmg/accelerators.hpp"
#include "kmg/assignment_lp.hpp"
#include "kmg/objective.hpp"
#include "kmg/polytope.hpp"
#include "kmg/relaxation.hpp"

namespace kmg {

void SolverConfig::validate(Index n) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (n_min < 1) throw std::invalid_argument("n_min must be >= 1");
  if (n < static_cast<Index>(k) * n_min) throw std::invalid_argument("infeasible: n < k * n_min");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  if (!(rel_gap >= 0.0)) throw std::invalid_argument("rel_gap must be >= 0");
  if (epsilon == 0.0 && rel_gap == 0.0) throw std::invalid_argument("epsilon or rel_gap must be positive");
  if (branch_vertex_limit < 1) throw std::invalid_argument("branch_vertex_limit must be >= 1");
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

void SolveTrace::write_csv(std::ostream& out) const {
  out << "iter,node,lower,upper,gap,cut_kind,vertices\n";
  const auto old = out.precision(17);
  for (const TraceRow& r : rows) {
    out << r.iter << ',' << r.node << ',' << r.lower << ',' << r.upper << ',' << r.gap << ',' << r.cut_kind << ','
        << r.vertices << '\n';
  }
  out.precision(old);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  BranchNode data;
  bool open = true;
};

class Driver {
 public:
  Driver(const PointCloud& cloud, const SolverConfig& config)
      : cloud_(cloud),
        cfg_(config),
        k_(config.k),
        bounds_(init_simplex(cloud, config.k, config.n_min)),
        chart_(cloud, config.k, bounds_),
        masses_(chart_.mass_functionals()),
        start_(Clock::now()) {}

  SolveResult run();

 private:
  const PointCloud& cloud_;
  const SolverConfig& cfg_;
  Index k_;
  BoundingSimplex bounds_;
  MarginalChart chart_;
  std::vector<AffineFunctional> masses_;
  Clock::time_point start_;

  std::vector<Node> nodes_;
  std::vector<double> closed_floors_;  // exhausted nodes keep their bound
  double upper_ = std::numeric_limits<double>::infinity();
  double lower_ = -std::numeric_limits<double>::infinity();
  Assignment incumbent_;
  SolveResult res_;

  double reduced_objective(const Eigen::Ref<const Eigen::VectorXd>& y) const {
    thread_local Eigen::MatrixXd z;
    z.resize(cloud_.d() + 1, k_);
    chart_.to_full(y, z);
    return concave_objective(cloud_.c0(), z);
  }

  void offer(const Assignment& gamma) {
    if (!gamma.satisfies_min_size(cfg_.n_min)) return;
    const double f = kmeans_objective(cloud_, gamma);
    if (f < upper_) {
      upper_ = f;
      incumbent_ = gamma;
    }
  }

  double noise_floor() const {
    return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, cloud_.c0());
  }

  double prune_tolerance() const {
    double tol = std::max(cfg_.epsilon, noise_floor());
    if (std::isfinite(upper_)) tol = std::max(tol, cfg_.rel_gap * std::max(std::abs(upper_), 1.0));
    return tol;
  }

  double global_lower() const {
    double l = upper_;
    for (const Node& nd : nodes_) {
      if (nd.open) l = std::min(l, nd.data.lower_bound);
    }
    for (double f : closed_floors_) l = std::min(l, f);
    return l;
  }

  double relative_gap() const {
    if (!std::isfinite(upper_)) return std::numeric_limits<double>::infinity();
    return (upper_ - lower_) / std::max(std::abs(upper_), 1.0);
  }

  bool converged() const {
    if (!std::isfinite(upper_)) return false;
    const double gap = upper_ - lower_;
    return gap < cfg_.epsilon || relative_gap() < cfg_.rel_gap || gap <= noise_floor();
  }

  std::size_t open_vertices() const {
    std::size_t v = 0;
    for (const Node& nd : nodes_) {
      if (nd.open) v += nd.data.polytope.num_vertices();
    }
    return v;
  }

  // Restricts a full-space cut to the chart and applies it. Returns true
  // when the polytope changed.
  bool apply(Polytope& p, const HalfSpace& full) {
    const std::optional<HalfSpace> h = chart_.project(full);
    if (!h) return false;
    if (p.add_cut(*h) == CutOutcome::redundant) return false;
    ++res_.cuts_added;
    return true;
  }

  void update_lower() { lower_ = std::max(lower_, global_lower()); }

  Polytope root_polytope();
  std::optional<std::size_t> select_node() const;
};

Polytope Driver::root_polytope() {
  Polytope p = chart_.initial_polytope();
  p.set_threads(cfg_.threads);
  if (cfg_.symmetry_breaking && k_ >= 2) {
    for (const HalfSpace& h : symmetry_cuts(k_, cloud_.d())) apply(p, h);
  }
  if (cfg_.centroid_box) {
    for (const HalfSpace& h : centroid_box_cuts(cloud_, k_)) apply(p, h);
  }
  return p;
}

std::optional<std::size_t> Driver::select_node() const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].open) continue;
    if (!best || nodes_[i].data.lower_bound < nodes_[*best].data.lower_bound) best = i;
  }
  return best;
}

SolveResult Driver::run() {
  nodes_.push_back({BranchNode{root_polytope(), -std::numeric_limits<double>::infinity(), 0, 0}, true});
  int next_id = 1;
  const int tight_count = cfg_.tight_count > 0 ? cfg_.tight_count : 2 * static_cast<int>(k_);
  res_.stop_reason = "converged";
  bool certified = true;

  for (;;) {
    update_lower();
    if (converged()) break;
    const std::optional<std::size_t> pick = select_node();
    if (!pick) {
      // Every node is closed; whatever remains of the gap is final.
      lower_ = std::max(lower_, global_lower());
      if (!converged()) {
        certified = false;
        res_.stop_reason = "exhausted";
      }
      break;
    }
    if (res_.iterations >= cfg_.max_iterations) {
      certified = false;
      res_.stop_reason = "max_iterations";
      break;
    }
    if (open_vertices() > cfg_.max_total_vertices) {
      certified = false;
      res_.stop_reason = "max_vertices";
      break;
    }
    if (cfg_.time_limit_seconds > 0.0 &&
        std::chrono::duration<double>(Clock::now() - start_).count() > cfg_.time_limit_seconds) {
      certified = false;
      res_.stop_reason = "time_limit";
      break;
    }

    ++res_.iterations;
    Node& node = nodes_[*pick];
    Polytope& poly = node.data.polytope;
    TraceRow row;
    row.iter = res_.iterations;
    row.node = node.data.id;
    std::vector<std::string> kinds;

    const VertexMin vm = min_vertex(poly, [this](const auto& y) { return reduced_objective(y); });
    node.data.lower_bound = std::max(node.data.lower_bound, vm.value);
    const Eigen::MatrixXd zn = chart_.to_full(vm.vertex);
    const Eigen::MatrixXd grad = gradient(zn);
    const GradientCut gc = cut_from_gradient(cloud_, grad, cfg_.n_min);
    offer(gc.assignment);
    Assignment local = gc.assignment;
    if (cfg_.local_search) {
      LocalSearchResult ls = local_search(cloud_, gc.assignment, cfg_.n_min);
      local = ls.assignment;
      offer(local);
    }
    update_lower();

    bool progress = false;
    if (node.data.lower_bound >= upper_ - prune_tolerance()) {
      node.open = false;
      closed_floors_.push_back(node.data.lower_bound);
      kinds.push_back("prune");
    } else {
      try {
        const double g = relative_gap();
        if (cfg_.least_squares_cuts && g > cfg_.ls_gate) {
          const Projection proj = ls_project(cloud_, zn, cfg_.n_min, 0.0);
          offer(proj.assignment);
          if (proj.cut && apply(poly, *proj.cut)) {
            progress = true;
            kinds.emplace_back(to_string(CutKind::least_squares));
          }
        }
        if (cfg_.tight_cuts && g < cfg_.tight_gate) {
          bool any_tight = false;
          if (gc.basis) {
            for (const Eigen::MatrixXd& nrm : tight_cuts(cloud_, *gc.basis, grad, {cfg_.tight_alpha, tight_count})) {
              GradientCut tc = cut_from_gradient(cloud_, nrm, cfg_.n_min);
              tc.halfspace.kind = CutKind::tight;
              if (apply(poly, tc.halfspace)) any_tight = progress = true;
            }
          }
          if (any_tight) kinds.emplace_back(to_string(CutKind::tight));
          const Eigen::MatrixXd zl = ZMatrix::from_assignment(cloud_, local).matrix();
          const Eigen::MatrixXd gl = gradient(zl);
          GradientCut lc = cut_from_gradient(cloud_, gl, cfg_.n_min);
          lc.halfspace.kind = CutKind::local_optimum;
          bool any_local = apply(poly, lc.halfspace);
          if (lc.basis) {
            for (const Eigen::MatrixXd& nrm : tight_cuts(cloud_, *lc.basis, gl, {cfg_.tight_alpha, tight_count})) {
              GradientCut tc = cut_from_gradient(cloud_, nrm, cfg_.n_min);
              tc.halfspace.kind = CutKind::local_optimum;
              if (apply(poly, tc.halfspace)) any_local = true;
            }
          }
          if (any_local) {
            progress = true;
            kinds.emplace_back(to_string(CutKind::local_optimum));
          }
        }
        if (cfg_.integer_cuts) {
          bool any_int = false;
          for (const HalfSpace& h : integer_prune(poly, masses_)) {
            if (poly.add_cut(h) == CutOutcome::applied) {
              ++res_.cuts_added;
              any_int = progress = true;
            }
          }
          if (any_int) kinds.emplace_back(to_string(CutKind::integer));
        }

        const std::optional<HalfSpace> cut = chart_.project(gc.halfspace);
        const bool separates = cut && !gc.degenerate &&
                               cut->slack(vm.vertex) < -1e-12 * std::max(1.0, std::abs(cut->offset));
        if (separates && poly.add_cut(*cut) == CutOutcome::applied) {
          ++res_.cuts_added;
          progress = true;
          kinds.emplace_back(to_string(CutKind::gradient));
        }
        if (!progress) {
          // The relaxation minimiser cannot be separated from the feasible
          // set any further; the node bound is final.
          node.open = false;
          closed_floors_.push_back(node.data.lower_bound);
          kinds.push_back("exhausted");
        }
      } catch (const InfeasibleRegion&) {
        node.open = false;
        kinds.push_back("infeasible");
      }
    }

    if (node.open && poly.num_vertices() > cfg_.branch_vertex_limit) {
      try {
        auto [a, b] = branch(node.data, cfg_.beta, next_id);
        node.open = false;
        ++res_.branches;
        kinds.emplace_back(to_string(CutKind::branch));
        nodes_.push_back({std::move(a), true});
        nodes_.push_back({std::move(b), true});
      } catch (const std::domain_error&) {
      } catch (const InfeasibleRegion&) {
      }
    }

    const Node& cur = nodes_[*pick];
    res_.constraints = cur.data.polytope.num_halfspaces();
    update_lower();
    row.lower = lower_;
    row.upper = upper_;
    row.gap = upper_ - lower_;
    for (std::size_t i = 0; i < kinds.size(); ++i) row.cut_kind += (i ? "+" : "") + kinds[i];
    row.vertices = cur.data.polytope.num_vertices();
    const std::size_t live = open_vertices();
    res_.peak_vertices = std::max({res_.peak_vertices, live, row.vertices});
    res_.cumulative_vertices += row.vertices;
    res_.trace.rows.push_back(std::move(row));
  }

  lower_ = std::min(lower_, upper_);
  res_.best_assignment = incumbent_;
  res_.best_objective = upper_;
  res_.lower_bound = lower_;
  res_.relative_gap = relative_gap();
  res_.status = certified && converged() ? SolveStatus::certified : SolveStatus::uncertified;
  res_.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
  return std::move(res_);
}

}  // namespace

SolveResult solve(const PointCloud& cloud, const SolverConfig& config) {
  config.validate(cloud.n());
  if (config.k == 1) {
    const auto start = Clock::now();
    SolveResult res;
    res.best_assignment = Assignment(std::vector<int>(static_cast<std::size_t>(cloud.n()), 0), 1);
    res.best_objective = kmeans_objective(cloud, res.best_assignment);
    res.lower_bound = res.best_objective;
    res.status = SolveStatus::certified;
    res.stop_reason = "converged";
    res.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return res;
  }
  Driver driver(cloud, config);
  return driver.run();
}

}  // namespace kmg
