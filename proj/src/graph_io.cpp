#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "subhc/graph.hpp"

namespace subhc {

Graph read_edge_list(std::istream& in, std::optional<std::size_t> n) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  std::size_t max_id_plus_one = 0;
  std::optional<std::size_t> header_n;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      // "# n <count>" written by write_edge_list keeps trailing isolated vertices
      std::istringstream hs(line.substr(hash + 1));
      std::string key;
      std::size_t value;
      if (hs >> key && key == "n" && hs >> value) header_n = value;
      line.resize(hash);
    }
    std::istringstream ss(line);
    std::int64_t u, v;
    if (!(ss >> u)) continue;  // blank
    if (!(ss >> v)) throw ParseError("expected 'u v [w]'", lineno);
    double w = 1.0;
    if (!(ss >> w)) {
      if (!ss.eof()) throw ParseError("bad weight", lineno);
      w = 1.0;
    }
    std::string extra;
    if (ss.clear(), ss >> extra) throw ParseError("trailing tokens", lineno);
    if (u < 0 || v < 0 || u > std::numeric_limits<Vertex>::max() || v > std::numeric_limits<Vertex>::max())
      throw ParseError("vertex id out of range", lineno);
    if (u == v) throw ParseError("self loop", lineno);
    if (!(w > 0.0)) throw ParseError("weight must be positive", lineno);
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
    max_id_plus_one = std::max<std::size_t>(max_id_plus_one, static_cast<std::size_t>(std::max(u, v)) + 1);
  }
  const std::size_t count = n ? *n : std::max(header_n.value_or(0), max_id_plus_one);
  if (count < max_id_plus_one) throw DomainError("edge list mentions vertex ids >= n");
  return Graph(count, std::move(edges));
}

Graph read_edge_list_file(const std::string& path, std::optional<std::size_t> n) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return read_edge_list(in, n);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# n " << g.n() << " m " << g.m() << '\n';
  const bool unit = g.unit_weights();
  out << std::setprecision(17);
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (!unit) out << ' ' << e.w;
    out << '\n';
  }
}

}  // namespace subhc
