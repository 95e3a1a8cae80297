#include <ostream>

#include "json.hpp"
#include "kmg/polytope.hpp"

namespace kmg {

void write_polytope_json(std::ostream& out, const Polytope& p) {
  using nlohmann::json;
  json doc;
  doc["dim"] = p.dim();
  json vertices = json::array();
  json tight = json::array();
  for (std::size_t v = 0; v < p.num_vertices(); ++v) {
    const auto x = p.vertex(v);
    vertices.push_back(std::vector<double>(x.data(), x.data() + x.size()));
    const auto ts = p.tight_set(v);
    tight.push_back(std::vector<std::uint32_t>(ts.begin(), ts.end()));
  }
  doc["vertices"] = std::move(vertices);
  doc["tight_sets"] = std::move(tight);
  json edges = json::array();
  for (const Edge& e : p.edges()) edges.push_back({e.a, e.b});
  doc["edges"] = std::move(edges);
  json hs = json::array();
  for (const HalfSpace& h : p.halfspaces()) {
    hs.push_back({{"normal", std::vector<double>(h.normal.data(), h.normal.data() + h.normal.size())},
                  {"offset", h.offset},
                  {"kind", std::string(to_string(h.kind))}});
  }
  doc["halfspaces"] = std::move(hs);
  doc["redundant_cuts"] = p.redundant_cuts();
  out << doc.dump(1) << '\n';
}

}  // namespace kmg
