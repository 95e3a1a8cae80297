#include "kmg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace kmg {

namespace {

struct Contingency {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows;
  std::map<int, double> cols;
  double n = 0.0;
};

Contingency tabulate(const Assignment& gamma, const std::vector<int>& labels) {
  if (static_cast<Index>(labels.size()) != gamma.n()) throw std::invalid_argument("metrics: label count mismatch");
  if (labels.empty()) throw std::invalid_argument("metrics: empty labelling");
  Contingency t;
  for (Index i = 0; i < gamma.n(); ++i) {
    const int a = gamma.label(i);
    const int b = labels[static_cast<std::size_t>(i)];
    t.joint[{a, b}] += 1.0;
    t.rows[a] += 1.0;
    t.cols[b] += 1.0;
  }
  t.n = static_cast<double>(labels.size());
  return t;
}

double entropy(const std::map<int, double>& m, double n) {
  double h = 0.0;
  for (const auto& [key, c] : m) h -= c / n * std::log(c / n);
  return h;
}

}  // namespace

double purity(const Assignment& gamma, const std::vector<int>& labels) {
  const Contingency t = tabulate(gamma, labels);
  std::map<int, double> best;
  for (const auto& [key, c] : t.joint) best[key.first] = std::max(best[key.first], c);
  double sum = 0.0;
  for (const auto& [key, c] : best) sum += c;
  return sum / t.n;
}

double nmi(const Assignment& gamma, const std::vector<int>& labels) {
  const Contingency t = tabulate(gamma, labels);
  double mi = 0.0;
  for (const auto& [key, c] : t.joint) {
    mi += c / t.n * std::log(c * t.n / (t.rows.at(key.first) * t.cols.at(key.second)));
  }
  const double mean_h = 0.5 * (entropy(t.rows, t.n) + entropy(t.cols, t.n));
  if (mean_h <= 0.0) return 0.0;
  return std::clamp(mi / mean_h, 0.0, 1.0);
}

}  // namespace kmg
