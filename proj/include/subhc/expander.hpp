#ifndef SUBHC_EXPANDER_HPP
#define SUBHC_EXPANDER_HPP

#include <cstdint>
#include <vector>

#include "subhc/graph.hpp"

namespace subhc {

/// Union of d/2 uniformly random Hamiltonian cycles on n vertices, kept with multiplicity.
///
/// Every vertex has exactly d incident edge slots (two per cycle), and the union is
/// connected because each cycle already is. All edges carry the same weight.
class ExpanderGraph {
 public:
  ExpanderGraph() = default;
  ExpanderGraph(std::size_t n, std::size_t d, double edge_weight, std::uint64_t seed);

  std::size_t n() const noexcept { return n_; }
  std::size_t degree() const noexcept { return d_; }
  double edge_weight() const noexcept { return weight_; }
  /// d * edge_weight: the expander's contribution to every vertex's weighted degree.
  double weighted_degree() const noexcept { return static_cast<double>(d_) * weight_; }

  /// Endpoint across slot s in [0, d) of vertex v: slot 2c is the successor on cycle c,
  /// slot 2c+1 the predecessor.
  Vertex slot_neighbor(Vertex v, std::size_t slot) const;

  /// All n*d/2 edges (parallel edges kept).
  std::vector<Edge> edges() const;
  Graph graph() const { return Graph(n_, edges()); }

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  double weight_ = 1.0;
  std::vector<std::vector<Vertex>> cycles_;          // [cycle][position] -> vertex
  std::vector<std::vector<std::uint32_t>> position_;  // [cycle][vertex] -> position
};

/// d/2 random Hamiltonian cycles; n >= 3, d even and >= 2. Deterministic per seed.
ExpanderGraph build_expander(std::size_t n, std::size_t d, std::uint64_t seed, double edge_weight = 1.0);

}  // namespace subhc

#endif  // SUBHC_EXPANDER_HPP
