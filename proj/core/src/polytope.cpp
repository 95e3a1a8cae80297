#include "kmg/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "kmg/parallel.hpp"

namespace kmg {

std::string_view to_string(CutKind kind) {
  switch (kind) {
    case CutKind::bound: return "bound";
    case CutKind::gradient: return "gradient";
    case CutKind::least_squares: return "least-squares";
    case CutKind::tight: return "tight";
    case CutKind::local_optimum: return "local-optimum";
    case CutKind::box: return "box";
    case CutKind::integer: return "integer";
    case CutKind::symmetry: return "symmetry";
    case CutKind::branch: return "branch";
  }
  return "unknown";
}

Polytope Polytope::simplex_product(Index dim, const std::vector<SimplexFactor>& factors) {
  Polytope p;
  p.dim_ = dim;

  std::vector<int> covered(static_cast<std::size_t>(dim), 0);
  std::vector<std::uint32_t> first_halfspace;
  for (const auto& f : factors) {
    const auto m = static_cast<Index>(f.coords.size());
    if (m == 0 || f.lower.size() != m) throw std::invalid_argument("simplex_product: malformed factor");
    for (Index c : f.coords) {
      if (c < 0 || c >= dim || covered[static_cast<std::size_t>(c)]++) {
        throw std::invalid_argument("simplex_product: factors must partition the coordinates");
      }
    }
    if (!(f.upper_sum - f.lower.sum() > 0.0)) throw std::invalid_argument("simplex_product: empty or flat factor");

    first_halfspace.push_back(static_cast<std::uint32_t>(p.halfspaces_.size()));
    for (Index t = 0; t < m; ++t) {
      HalfSpace h{Eigen::VectorXd::Zero(dim), -f.lower(t), CutKind::bound};
      h.normal(f.coords[static_cast<std::size_t>(t)]) = -1.0;
      p.halfspaces_.push_back(std::move(h));
    }
    HalfSpace sum{Eigen::VectorXd::Zero(dim), f.upper_sum, CutKind::bound};
    for (Index c : f.coords) sum.normal(c) = 1.0;
    const double nrm = sum.normal.norm();
    sum.normal /= nrm;
    sum.offset /= nrm;
    p.halfspaces_.push_back(std::move(sum));
  }
  if (std::any_of(covered.begin(), covered.end(), [](int c) { return c != 1; })) {
    throw std::invalid_argument("simplex_product: factors must partition the coordinates");
  }

  // Vertex = one choice per factor: 0 is the all-lower corner, t+1 raises
  // coordinate t to absorb the full width.
  const std::size_t nf = factors.size();
  std::vector<std::size_t> radix(nf);
  std::size_t total = 1;
  for (std::size_t f = 0; f < nf; ++f) {
    radix[f] = factors[f].coords.size() + 1;
    total *= radix[f];
  }

  std::vector<std::size_t> choice(nf, 0);
  p.tight_offset_.push_back(0);
  for (std::size_t v = 0; v < total; ++v) {
    std::size_t rem = v;
    for (std::size_t f = 0; f < nf; ++f) {
      choice[f] = rem % radix[f];
      rem /= radix[f];
    }
    Eigen::VectorXd x(dim);
    for (std::size_t f = 0; f < nf; ++f) {
      const auto& fac = factors[f];
      const double width = fac.upper_sum - fac.lower.sum();
      const auto m = fac.coords.size();
      for (std::size_t t = 0; t < m; ++t) {
        x(fac.coords[t]) = fac.lower(static_cast<Index>(t)) + (choice[f] == t + 1 ? width : 0.0);
      }
      for (std::size_t t = 0; t < m; ++t) {
        if (choice[f] != t + 1) p.tight_pool_.push_back(first_halfspace[f] + static_cast<std::uint32_t>(t));
      }
      if (choice[f] != 0) p.tight_pool_.push_back(first_halfspace[f] + static_cast<std::uint32_t>(m));
    }
    p.coords_.insert(p.coords_.end(), x.data(), x.data() + dim);
    p.tight_offset_.push_back(p.tight_pool_.size());

    // Neighbours differ in exactly one factor; emit each edge once.
    std::size_t stride = 1;
    for (std::size_t f = 0; f < nf; ++f) {
      for (std::size_t c = choice[f] + 1; c < radix[f]; ++c) {
        const std::size_t u = v + (c - choice[f]) * stride;
        p.edges_.push_back({static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(u)});
      }
      stride *= radix[f];
    }
  }
  return p;
}

Polytope Polytope::simplex(const Eigen::VectorXd& lower, double upper_sum) {
  SimplexFactor f;
  f.coords.resize(static_cast<std::size_t>(lower.size()));
  std::iota(f.coords.begin(), f.coords.end(), Index{0});
  f.lower = lower;
  f.upper_sum = upper_sum;
  return simplex_product(lower.size(), {f});
}

Polytope Polytope::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("box: size mismatch");
  std::vector<SimplexFactor> factors;
  for (Index i = 0; i < lo.size(); ++i) {
    SimplexFactor f;
    f.coords = {i};
    f.lower = Eigen::VectorXd::Constant(1, lo(i));
    f.upper_sum = hi(i);
    factors.push_back(std::move(f));
  }
  return simplex_product(lo.size(), factors);
}

Eigen::MatrixXd Polytope::vertex_matrix() const {
  return Eigen::Map<const Eigen::MatrixXd>(coords_.data(), dim_, static_cast<Index>(num_vertices()));
}

Index Polytope::rank_of(std::span<const std::uint32_t> ids) const {
  if (ids.empty()) return 0;
  Eigen::MatrixXd m(static_cast<Index>(ids.size()), dim_);
  for (std::size_t r = 0; r < ids.size(); ++r) m.row(static_cast<Index>(r)) = halfspaces_[ids[r]].normal.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(tol_.rank);
  return lu.rank();
}

CutOutcome Polytope::add_cut(HalfSpace h) {
  if (h.normal.size() != dim_) throw std::invalid_argument("add_cut: normal has wrong dimension");
  const double nrm = h.normal.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm) || !std::isfinite(h.offset)) {
    throw std::invalid_argument("add_cut: zero or non-finite normal");
  }
  h.normal /= nrm;
  h.offset /= nrm;

  const std::size_t nv = num_vertices();
  const double band = tol_.classify * std::max(std::abs(h.offset), 1.0);

  // 0 = strictly inside, 1 = on the cut, 2 = cut away.
  std::vector<double> val(nv);
  std::vector<std::uint8_t> status(nv);
  parallel_chunks(nv, threads_, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t v = b; v < e; ++v) {
      const double s = h.normal.dot(vertex(v)) - h.offset;
      val[v] = s;
      status[v] = s > band ? 2 : (s >= -band ? 1 : 0);
    }
  });

  const auto n_cut = static_cast<std::size_t>(std::count(status.begin(), status.end(), std::uint8_t{2}));
  if (n_cut == 0) {
    ++redundant_cuts_;
    return CutOutcome::redundant;
  }
  if (n_cut == nv) throw InfeasibleRegion("add_cut: cut removes every vertex");

  const auto hidx = static_cast<std::uint32_t>(halfspaces_.size());
  const auto D = static_cast<std::size_t>(dim_);

  std::vector<double> coords;
  std::vector<std::uint32_t> pool;
  std::vector<std::size_t> offset{0};
  coords.reserve(coords_.size());
  pool.reserve(tight_pool_.size());

  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(nv, kNone);
  std::vector<std::uint32_t> facet;  // new indices of vertices on the cut
  std::uint32_t next = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    if (status[v] == 2) continue;
    remap[v] = next;
    coords.insert(coords.end(), coords_.begin() + static_cast<std::ptrdiff_t>(v * D),
                  coords_.begin() + static_cast<std::ptrdiff_t>((v + 1) * D));
    auto ts = tight_set(v);
    pool.insert(pool.end(), ts.begin(), ts.end());
    if (status[v] == 1) {
      pool.push_back(hidx);
      facet.push_back(next);
    }
    offset.push_back(pool.size());
    ++next;
  }

  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  std::vector<std::uint32_t> common;
  for (const Edge& e : edges_) {
    const std::uint8_t sa = status[e.a];
    const std::uint8_t sb = status[e.b];
    if (sa != 2 && sb != 2) {
      // Edges inside the cut plane are rebuilt below with the facet.
      if (!(sa == 1 && sb == 1)) edges.push_back({remap[e.a], remap[e.b]});
      continue;
    }
    if (!((sa == 0 && sb == 2) || (sa == 2 && sb == 0))) continue;
    const std::uint32_t in = sa == 0 ? e.a : e.b;
    const std::uint32_t out = sa == 0 ? e.b : e.a;
    const double t = val[in] / (val[in] - val[out]);
    const auto xin = vertex(in);
    const auto xout = vertex(out);
    for (std::size_t c = 0; c < D; ++c) {
      const auto ci = static_cast<Index>(c);
      coords.push_back(xin(ci) + t * (xout(ci) - xin(ci)));
    }
    auto ta = tight_set(in);
    auto tb = tight_set(out);
    common.clear();
    std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
    pool.insert(pool.end(), common.begin(), common.end());
    pool.push_back(hidx);
    offset.push_back(pool.size());
    edges.push_back({remap[in], next});
    facet.push_back(next);
    ++next;
  }

  coords_ = std::move(coords);
  tight_pool_ = std::move(pool);
  tight_offset_ = std::move(offset);
  halfspaces_.push_back(std::move(h));

  // Edges of the new facet. Two facet vertices are adjacent iff the normals
  // tight at both (the new cut included) have rank dim - 1; candidates must
  // share at least dim - 2 older constraints.
  const std::size_t m = facet.size();
  if (dim_ >= 2 && m >= 2) {
    const std::size_t need = D - 2;
    auto old_tight = [&](std::uint32_t v) {
      auto ts = tight_set(v);
      return ts.first(ts.size() - 1);  // hidx is last
    };
    auto test_pair = [&](std::uint32_t a, std::uint32_t b) {
      auto ta = tight_set(a);
      auto tb = tight_set(b);
      common.clear();
      std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
      if (common.size() + 1 < D) return;
      if (rank_of(common) == dim_ - 1) edges.push_back({a, b});
    };

    if (need == 0) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) test_pair(facet[i], facet[j]);
    } else {
      std::vector<std::vector<std::uint32_t>> members(hidx);
      for (std::size_t i = 0; i < m; ++i)
        for (std::uint32_t c : old_tight(facet[i])) members[c].push_back(static_cast<std::uint32_t>(i));
      std::vector<std::uint32_t> count(m, 0);
      std::vector<std::uint32_t> touched;
      for (std::size_t i = 0; i < m; ++i) {
        touched.clear();
        for (std::uint32_t c : old_tight(facet[i])) {
          for (std::uint32_t j : members[c]) {
            if (j <= i) continue;
            if (count[j]++ == 0) touched.push_back(j);
          }
        }
        std::sort(touched.begin(), touched.end());
        for (std::uint32_t j : touched) {
          if (count[j] >= need) test_pair(facet[i], facet[j]);
          count[j] = 0;
        }
      }
    }
  }
  edges_ = std::move(edges);
  return CutOutcome::applied;
}

std::vector<std::string> Polytope::check_invariants() const {
  std::vector<std::string> issues;
  const std::size_t nv = num_vertices();
  for (std::size_t v = 0; v < nv; ++v) {
    const auto x = vertex(v);
    for (std::size_t r = 0; r < halfspaces_.size(); ++r) {
      const auto& h = halfspaces_[r];
      const double s = h.normal.dot(x) - h.offset;
      if (s > tol_.feasibility * std::max(std::abs(h.offset), 1.0)) {
        issues.push_back("vertex " + std::to_string(v) + " violates half-space " + std::to_string(r) + " by " +
                         std::to_string(s));
      }
    }
    auto ts = tight_set(v);
    for (std::uint32_t r : ts) {
      const auto& h = halfspaces_[r];
      const double s = h.normal.dot(x) - h.offset;
      if (std::abs(s) > tol_.tight * std::max(std::abs(h.offset), 1.0)) {
        issues.push_back("vertex " + std::to_string(v) + " lists half-space " + std::to_string(r) +
                         " as tight but is off by " + std::to_string(s));
      }
    }
    if (rank_of(ts) != dim_) issues.push_back("vertex " + std::to_string(v) + " has tight rank below dim");
  }
  std::vector<std::uint32_t> common;
  for (const Edge& e : edges_) {
    if (e.a >= nv || e.b >= nv || e.a == e.b) {
      issues.push_back("malformed edge");
      continue;
    }
    auto ta = tight_set(e.a);
    auto tb = tight_set(e.b);
    common.clear();
    std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
    if (rank_of(common) != dim_ - 1) {
      issues.push_back("edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " common tight rank is not dim-1");
    }
  }
  return issues;
}

Polytope add_cut(Polytope p, const HalfSpace& h) {
  p.add_cut(h);
  return p;
}

VertexMin min_vertex(const Polytope& p, const VertexObjective& objective) {
  const std::size_t nv = p.num_vertices();
  if (nv == 0) throw std::invalid_argument("min_vertex: empty polytope");
  const std::size_t chunks = chunk_count(nv, p.threads());
  std::vector<std::size_t> best_idx(chunks, 0);
  std::vector<double> best_val(chunks, std::numeric_limits<double>::infinity());
  parallel_chunks(nv, p.threads(), [&](std::size_t b, std::size_t e, std::size_t c) {
    for (std::size_t v = b; v < e; ++v) {
      const double f = objective(p.vertex(v));
      if (f < best_val[c]) {
        best_val[c] = f;
        best_idx[c] = v;
      }
    }
  });
  std::size_t c = 0;
  for (std::size_t i = 1; i < chunks; ++i) {
    if (best_val[i] < best_val[c]) c = i;
  }
  if (!std::isfinite(best_val[c])) throw std::domain_error("min_vertex: objective not finite on any vertex");
  return {best_idx[c], p.vertex(best_idx[c]), best_val[c]};
}

std::vector<HalfSpace> integer_prune(const Polytope& p, const std::vector<AffineFunctional>& counts) {
  constexpr double kIntTol = 1e-9;
  std::vector<HalfSpace> cuts;
  const std::size_t nv = p.num_vertices();
  if (nv == 0) return cuts;
  for (const auto& f : counts) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t v = 0; v < nv; ++v) {
      const double x = f(p.vertex(v));
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double lo_int = std::ceil(lo - kIntTol);
    const double hi_int = std::floor(hi + kIntTol);
    if (lo_int > hi_int) throw InfeasibleRegion("integer_prune: empty integer range");
    const bool coeff_zero = f.coeff.size() == 0 || f.coeff.isZero(0.0);
    if (coeff_zero) continue;
    if (lo_int - lo > kIntTol) cuts.push_back({-f.coeff, f.constant - lo_int, CutKind::integer});
    if (hi - hi_int > kIntTol) cuts.push_back({f.coeff, hi_int - f.constant, CutKind::integer});
  }
  return cuts;
}

SplitPlane split_plane(const Polytope& p) {
  const std::size_t nv = p.num_vertices();
  if (nv < 2 || p.dim() == 0) throw std::domain_error("split_plane: need at least two vertices");
  const Eigen::MatrixXd v = p.vertex_matrix();
  const Eigen::VectorXd mean = v.rowwise().mean();
  const Eigen::MatrixXd centred = v.colwise() - mean;
  const Eigen::MatrixXd scatter = centred * centred.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scatter);
  Eigen::VectorXd dir = eig.eigenvectors().col(p.dim() - 1);
  Index imax = 0;
  dir.cwiseAbs().maxCoeff(&imax);
  if (dir(imax) < 0) dir = -dir;
  const Eigen::VectorXd proj = v.transpose() * dir;
  const double spread = proj.maxCoeff() - proj.minCoeff();
  if (!(spread > 1e-12 * std::max(1.0, mean.norm()))) throw std::domain_error("split_plane: degenerate vertex cloud");
  return {dir, dir.dot(mean), spread};
}

std::pair<BranchNode, BranchNode> branch(const BranchNode& parent, double beta, int& next_id) {
  const SplitPlane plane = split_plane(parent.polytope);
  const double overlap = beta * plane.spread;
  BranchNode lower{parent.polytope, parent.lower_bound, parent.depth + 1, next_id++};
  BranchNode upper{parent.polytope, parent.lower_bound, parent.depth + 1, next_id++};
  lower.polytope.add_cut({plane.direction, plane.center + overlap, CutKind::branch});
  upper.polytope.add_cut({-plane.direction, -plane.center + overlap, CutKind::branch});
  return {std::move(lower), std::move(upper)};
}

}  // namespace kmg
