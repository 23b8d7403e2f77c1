#ifndef SUBHC_ORACLE_HPP
#define SUBHC_ORACLE_HPP

#include <cmath>
#include <memory>
#include <utility>

#include "subhc/graph.hpp"
#include "subhc/ledger.hpp"

namespace subhc {

/// Degree / i-th neighbour access to an unweighted graph. The sparsifier is written
/// against this interface only.
class GraphAccess {
 public:
  virtual ~GraphAccess() = default;
  virtual std::size_t vertex_count() const = 0;
  virtual std::size_t degree(Vertex v) = 0;
  /// 1-based index i in [1, degree(v)].
  virtual Vertex neighbor(Vertex v, std::size_t i) = 0;
};

/// Query-model gateway to a hidden graph.
///
/// Every degree or neighbour query costs one unit on the ledger. In the weight-sorted
/// variant the i-th neighbour is the i-th under non-decreasing edge weight, ties by
/// ascending neighbour id; the unweighted variant uses the same order.
class QueryOracle final : public GraphAccess {
 public:
  enum class Variant { unweighted, weight_sorted };

  explicit QueryOracle(Graph g, Variant variant = Variant::unweighted)
      : graph_(std::make_shared<const Graph>(std::move(g))), variant_(variant) {}

  std::size_t vertex_count() const override { return graph_->n(); }
  Variant variant() const noexcept { return variant_; }

  std::size_t degree(Vertex v) override {
    check(v);
    ledger_.charge_queries();
    return graph_->degree(v);
  }

  Vertex neighbor(Vertex v, std::size_t i) override { return weighted_neighbor(v, i).first; }

  std::pair<Vertex, double> weighted_neighbor(Vertex v, std::size_t i) {
    check(v);
    const auto adj = graph_->adjacency(v);
    if (i < 1 || i > adj.size())
      throw DomainError("neighbor index " + std::to_string(i) + " out of range for vertex " + std::to_string(v));
    ledger_.charge_queries();
    return {adj[i - 1].v, adj[i - 1].w};
  }

  ResourceLedger& ledger() noexcept { return ledger_; }
  const ResourceLedger& ledger() const noexcept { return ledger_; }

  /// The hidden graph, for scoring outputs after an algorithm has finished. Algorithms
  /// themselves never call this.
  friend const Graph& evaluation_graph(const QueryOracle& o) { return *o.graph_; }

 private:
  void check(Vertex v) const {
    if (v >= graph_->n()) throw DomainError("vertex id " + std::to_string(v) + " out of range");
  }

  std::shared_ptr<const Graph> graph_;
  Variant variant_;
  ResourceLedger ledger_;
};

/// Lower end (1+eps)^(i-1) of weight class i >= 1; classes are [(1+eps)^(i-1), (1+eps)^i).
inline double weight_class_floor(double eps, std::size_t i) { return std::pow(1.0 + eps, static_cast<double>(i) - 1.0); }

/// Class index (>= 1) of a weight w >= 1, consistent with weight_class_floor.
std::size_t weight_class_of(double w, double eps);

/// First 1-based index in v's weight-sorted adjacency whose weight is >= threshold,
/// or degree + 1 when none is; binary search with O(log degree) neighbour queries.
std::size_t first_index_at_least(QueryOracle& o, Vertex v, std::size_t degree, double threshold);

/// 1-based index range [lo, hi] of v's class-i edges (hi = lo - 1 when empty).
std::pair<std::size_t, std::size_t> weight_class_bounds(QueryOracle& o, Vertex v, std::size_t i, double eps);

}  // namespace subhc

#endif  // SUBHC_ORACLE_HPP
