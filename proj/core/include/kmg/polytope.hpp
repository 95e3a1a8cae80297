#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kmg/point_cloud.hpp"

namespace kmg {

/// Origin of a half-space; carried for traces and debug dumps only.
enum class CutKind : std::uint8_t {
  bound,
  gradient,
  least_squares,
  tight,
  local_optimum,
  box,
  integer,
  symmetry,
  branch,
};

std::string_view to_string(CutKind kind);

/// <normal, x> <= offset.
struct HalfSpace {
  Eigen::VectorXd normal;
  double offset = 0.0;
  CutKind kind = CutKind::gradient;

  double slack(const Eigen::Ref<const Eigen::VectorXd>& x) const { return offset - normal.dot(x); }
};

struct PolytopeTolerances {
  /// Vertex/half-space consistency for checks, times max(|b|, 1).
  double feasibility = 1e-8;
  /// Band around a new cut inside which a vertex counts as lying on it,
  /// times max(|b|, 1). Kept well below `feasibility` so that the relaxation
  /// can still be refined at certificate gaps near 1e-9.
  double classify = 1e-12;
  /// Tight-set membership used by checks.
  double tight = 1e-7;
  /// Rank threshold for stacks of unit normals.
  double rank = 1e-9;
};

struct Edge {
  std::uint32_t a;
  std::uint32_t b;
};

enum class CutOutcome { applied, redundant };

/// Bounded polytope held in double description: half-spaces, vertices, the
/// set of half-spaces tight at each vertex, and the vertex adjacency graph.
/// Cuts are applied incrementally; every half-space is rescaled to a unit
/// normal on insertion.
class Polytope {
 public:
  /// One factor of a product of simplices: coordinates `coords` satisfy
  /// x_c >= lower_c and sum_c x_c <= upper_sum.
  struct SimplexFactor {
    std::vector<Index> coords;
    Eigen::VectorXd lower;
    double upper_sum = 0.0;
  };

  Polytope() = default;

  /// Product of simplices over a partition of the coordinates. With no
  /// factors this is the single point of R^0.
  static Polytope simplex_product(Index dim, const std::vector<SimplexFactor>& factors);
  /// {x : x >= lower, sum x <= upper_sum}.
  static Polytope simplex(const Eigen::VectorXd& lower, double upper_sum);
  /// Axis-aligned box [lo, hi].
  static Polytope box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

  Index dim() const { return dim_; }
  std::size_t num_vertices() const { return tight_offset_.empty() ? 0 : tight_offset_.size() - 1; }
  std::size_t num_halfspaces() const { return halfspaces_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t redundant_cuts() const { return redundant_cuts_; }

  Eigen::Map<const Eigen::VectorXd> vertex(std::size_t v) const {
    return {coords_.data() + v * static_cast<std::size_t>(dim_), dim_};
  }
  std::span<const std::uint32_t> tight_set(std::size_t v) const {
    return {tight_pool_.data() + tight_offset_[v], tight_offset_[v + 1] - tight_offset_[v]};
  }
  const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// dim x V matrix of vertices.
  Eigen::MatrixXd vertex_matrix() const;

  const PolytopeTolerances& tolerances() const { return tol_; }
  void set_tolerances(const PolytopeTolerances& tol) { tol_ = tol; }
  int threads() const { return threads_; }
  void set_threads(int threads) { threads_ = threads < 1 ? 1 : threads; }

  /// Intersects with h. Vertices strictly beyond the cut are dropped, a new
  /// vertex is inserted on every edge from a kept vertex to a dropped one,
  /// and adjacency on the new facet is rebuilt with the rank test on common
  /// tight sets. A cut that removes nothing leaves the polytope untouched
  /// and returns `redundant`. Throws InfeasibleRegion if every vertex is cut.
  CutOutcome add_cut(HalfSpace h);

  /// Human-readable descriptions of every violated structural invariant;
  /// empty when consistent.
  std::vector<std::string> check_invariants() const;

 private:
  Index dim_ = 0;
  std::vector<double> coords_;
  std::vector<std::uint32_t> tight_pool_;
  std::vector<std::size_t> tight_offset_;
  std::vector<Edge> edges_;
  std::vector<HalfSpace> halfspaces_;
  PolytopeTolerances tol_;
  int threads_ = 1;
  std::size_t redundant_cuts_ = 0;

  Index rank_of(std::span<const std::uint32_t> ids) const;
};

/// Value semantics wrapper around Polytope::add_cut.
Polytope add_cut(Polytope p, const HalfSpace& h);

struct VertexMin {
  std::size_t index = 0;
  Eigen::VectorXd vertex;
  double value = 0.0;
};

using VertexObjective = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

/// Minimum of `objective` over the stored vertices (lowest index wins ties).
/// For a concave objective this is the minimum over the whole polytope.
VertexMin min_vertex(const Polytope& p, const VertexObjective& objective);

/// Affine functional coeff . x + constant on polytope coordinates.
struct AffineFunctional {
  Eigen::VectorXd coeff;
  double constant = 0.0;
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const { return coeff.dot(x) + constant; }
};

/// Inward-rounded integer bounds on each functional over the vertex set:
/// ceil(min) <= f <= floor(max). Bounds that are already integral (within
/// 1e-9) produce no cut. Throws InfeasibleRegion when ceil(min) > floor(max).
std::vector<HalfSpace> integer_prune(const Polytope& p, const std::vector<AffineFunctional>& counts);

struct BranchNode {
  Polytope polytope;
  double lower_bound = 0.0;
  int depth = 0;
  int id = 0;
};

/// Principal direction of the centred vertex cloud.
struct SplitPlane {
  Eigen::VectorXd direction;  // unit
  double center = 0.0;        // <direction, vertex mean>
  double spread = 0.0;        // max - min of <direction, v> over vertices
};

/// Throws std::domain_error when the vertex cloud has zero spread.
SplitPlane split_plane(const Polytope& p);

/// Children p ∩ {<v, x> <= c + beta*s} and p ∩ {<v, x> >= c - beta*s}.
/// `beta` is the overlap as a fraction of the spread s; ids are taken from
/// `next_id` and incremented.
std::pair<BranchNode, BranchNode> branch(const BranchNode& parent, double beta, int& next_id);

/// Debug dump: {"dim", "vertices", "tight_sets", "edges", "halfspaces"}.
void write_polytope_json(std::ostream& out, const Polytope& p);

}  // namespace kmg
