#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "kmg/assignment_lp.hpp"

namespace kmg {

std::vector<Index> LPBasis::nonbasic() const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(num_variables()) - basic.size());
  std::size_t b = 0;
  for (Index v = 0; v < num_variables(); ++v) {
    if (b < basic.size() && basic[b] == v) {
      ++b;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cheapest single-point transfer between each ordered pair of clusters.
struct MoveTable {
  Index k = 0;
  std::vector<double> cost;
  std::vector<Index> point;

  double& c(Index a, Index b) { return cost[static_cast<std::size_t>(a * k + b)]; }
  Index& p(Index a, Index b) { return point[static_cast<std::size_t>(a * k + b)]; }
};

void build_moves(const Eigen::Ref<const Eigen::MatrixXd>& w, const std::vector<int>& labels, MoveTable& m) {
  const Index k = w.cols();
  m.k = k;
  m.cost.assign(static_cast<std::size_t>(k * k), kInf);
  m.point.assign(static_cast<std::size_t>(k * k), -1);
  for (Index i = 0; i < w.rows(); ++i) {
    const Index a = labels[static_cast<std::size_t>(i)];
    for (Index c = 0; c < k; ++c) {
      if (c == a) continue;
      const double delta = w(i, c) - w(i, a);
      if (delta < m.c(a, c)) {
        m.c(a, c) = delta;
        m.p(a, c) = i;
      }
    }
  }
}

// Bellman-Ford over the move graph. Sources start at distance 0 and are
// never relaxed. A relaxation must gain more than `eps`, so cycles whose
// cost is rounding noise cannot be traversed.
void shortest_paths(MoveTable& m, const std::vector<char>& source, double eps, std::vector<double>& dist,
                    std::vector<Index>& pred) {
  const Index k = m.k;
  dist.assign(static_cast<std::size_t>(k), kInf);
  pred.assign(static_cast<std::size_t>(k), -1);
  for (Index j = 0; j < k; ++j) {
    if (source[static_cast<std::size_t>(j)]) dist[static_cast<std::size_t>(j)] = 0.0;
  }
  for (Index round = 0; round < k; ++round) {
    bool changed = false;
    for (Index a = 0; a < k; ++a) {
      const double da = dist[static_cast<std::size_t>(a)];
      if (da == kInf) continue;
      for (Index c = 0; c < k; ++c) {
        if (c == a || source[static_cast<std::size_t>(c)] || m.p(a, c) < 0) continue;
        const double cand = da + m.c(a, c);
        if (cand < dist[static_cast<std::size_t>(c)] - eps) {
          dist[static_cast<std::size_t>(c)] = cand;
          pred[static_cast<std::size_t>(c)] = a;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
}

struct DisjointSets {
  std::vector<Index> parent;
  explicit DisjointSets(Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Index{0});
  }
  Index find(Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
};

std::optional<LPBasis> assemble_basis(const Eigen::Ref<const Eigen::MatrixXd>& w, const std::vector<int>& labels,
                                      const std::vector<Index>& counts, Index n_min, MoveTable& moves,
                                      const std::vector<Index>& pred, const Eigen::VectorXd& u) {
  const Index n = w.rows();
  const Index k = w.cols();
  const double tol = 1e-9 * std::max(1.0, w.cwiseAbs().maxCoeff());

  LPBasis basis{n, k, {}};
  for (Index i = 0; i < n; ++i) basis.basic.push_back(LPBasis::gamma_index(n, i, labels[static_cast<std::size_t>(i)]));

  DisjointSets sets(k);
  std::vector<char> rooted(static_cast<std::size_t>(k), 0);
  auto add_root = [&](Index j) {
    rooted[static_cast<std::size_t>(sets.find(j))] = 1;
    basis.basic.push_back(LPBasis::slack_index(n, k, j));
  };
  auto try_link = [&](Index i, Index c) {
    const Index a = labels[static_cast<std::size_t>(i)];
    const Index ra = sets.find(a);
    const Index rc = sets.find(c);
    if (ra == rc) return false;
    if (rooted[static_cast<std::size_t>(ra)] && rooted[static_cast<std::size_t>(rc)]) return false;
    sets.parent[static_cast<std::size_t>(rc)] = ra;
    rooted[static_cast<std::size_t>(ra)] =
        static_cast<char>(rooted[static_cast<std::size_t>(ra)] | rooted[static_cast<std::size_t>(rc)]);
    basis.basic.push_back(LPBasis::gamma_index(n, i, c));
    return true;
  };

  for (Index j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] > n_min) add_root(j);
  }
  for (Index c = 0; c < k; ++c) {
    const Index a = pred[static_cast<std::size_t>(c)];
    if (a >= 0) try_link(moves.p(a, c), c);
  }

  // Remaining rootless components: take a zero-price slack or a zero
  // reduced-cost arc to a neighbouring component.
  for (bool progress = true; progress;) {
    progress = false;
    for (Index j = 0; j < k; ++j) {
      const Index r = sets.find(j);
      if (rooted[static_cast<std::size_t>(r)]) continue;
      if (u(j) <= tol) {
        add_root(j);
        progress = true;
      }
    }
    for (Index i = 0; i < n && !progress; ++i) {
      const Index a = labels[static_cast<std::size_t>(i)];
      const double vi = w(i, a) - u(a);
      for (Index c = 0; c < k; ++c) {
        if (c == a || std::abs(w(i, c) - vi - u(c)) > tol) continue;
        const bool open = !rooted[static_cast<std::size_t>(sets.find(a))] ||
                          !rooted[static_cast<std::size_t>(sets.find(c))];
        if (open && try_link(i, c)) {
          progress = true;
          break;
        }
      }
    }
  }
  for (Index j = 0; j < k; ++j) {
    if (!rooted[static_cast<std::size_t>(sets.find(j))]) return std::nullopt;
  }
  std::sort(basis.basic.begin(), basis.basic.end());
  if (static_cast<Index>(basis.basic.size()) != n + k) return std::nullopt;
  return basis;
}

}  // namespace

LinearMinResult linear_min(const Eigen::Ref<const Eigen::MatrixXd>& cost, Index n_min) {
  const Index n = cost.rows();
  const Index k = cost.cols();
  if (k < 1 || n < 1) throw std::invalid_argument("linear_min: empty cost matrix");
  if (n_min < 0) throw std::invalid_argument("linear_min: n_min must be >= 0");
  if (n < k * n_min) throw std::invalid_argument("linear_min: infeasible, n < k * n_min");
  if (!cost.allFinite()) throw std::invalid_argument("linear_min: non-finite cost");

  const double eps = 1e-13 * std::max(1.0, cost.cwiseAbs().maxCoeff());
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < n; ++i) {
    Index best = 0;
    for (Index j = 1; j < k; ++j) {
      if (cost(i, j) < cost(i, best)) best = j;
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    ++counts[static_cast<std::size_t>(best)];
  }

  MoveTable moves;
  std::vector<double> dist;
  std::vector<Index> pred;
  std::vector<char> source(static_cast<std::size_t>(k));
  auto mark_sources = [&] {
    for (Index j = 0; j < k; ++j) source[static_cast<std::size_t>(j)] = counts[static_cast<std::size_t>(j)] > n_min;
  };

  for (;;) {
    Index deficit = -1;
    for (Index j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] < n_min) deficit = j;
    }
    if (deficit < 0) break;
    build_moves(cost, labels, moves);
    mark_sources();
    shortest_paths(moves, source, eps, dist, pred);
    Index target = -1;
    for (Index j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] >= n_min || dist[static_cast<std::size_t>(j)] == kInf) continue;
      if (target < 0 || dist[static_cast<std::size_t>(j)] < dist[static_cast<std::size_t>(target)]) target = j;
    }
    if (target < 0) throw std::logic_error("linear_min: no augmenting path");
    Index c = target;
    for (Index hops = 0; pred[static_cast<std::size_t>(c)] >= 0; ++hops) {
      if (hops > k) throw std::logic_error("linear_min: cyclic predecessor chain");
      const Index a = pred[static_cast<std::size_t>(c)];
      labels[static_cast<std::size_t>(moves.p(a, c))] = static_cast<int>(c);
      c = a;
    }
    --counts[static_cast<std::size_t>(c)];
    ++counts[static_cast<std::size_t>(target)];
  }

  LinearMinResult out;
  double value = 0.0;
  for (Index i = 0; i < n; ++i) value += cost(i, labels[static_cast<std::size_t>(i)]);
  out.value = value;

  // Cluster prices from shortest distances to the slack set, or from a
  // virtual source when every cluster sits at its lower bound.
  build_moves(cost, labels, moves);
  mark_sources();
  const bool any_slack = std::any_of(source.begin(), source.end(), [](char s) { return s != 0; });
  if (any_slack) {
    shortest_paths(moves, source, eps, dist, pred);
  } else {
    std::vector<char> none(static_cast<std::size_t>(k), 0);
    dist.assign(static_cast<std::size_t>(k), 0.0);
    pred.assign(static_cast<std::size_t>(k), -1);
    for (Index round = 0; round < k; ++round) {
      bool changed = false;
      for (Index a = 0; a < k; ++a) {
        for (Index c = 0; c < k; ++c) {
          if (c == a || moves.p(a, c) < 0) continue;
          const double cand = dist[static_cast<std::size_t>(a)] + moves.c(a, c);
          if (cand < dist[static_cast<std::size_t>(c)] - eps) {
            dist[static_cast<std::size_t>(c)] = cand;
            pred[static_cast<std::size_t>(c)] = a;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
  }
  Eigen::VectorXd u(k);
  const double shift = any_slack ? 0.0 : *std::min_element(dist.begin(), dist.end());
  for (Index j = 0; j < k; ++j) {
    const double dj = dist[static_cast<std::size_t>(j)];
    u(j) = dj == kInf ? 0.0 : std::max(0.0, dj - shift);
  }
  out.cluster_duals = u;
  out.basis = assemble_basis(cost, labels, counts, n_min, moves, pred, u);
  out.assignment = Assignment(std::move(labels), static_cast<int>(k));
  return out;
}

}  // namespace kmg
