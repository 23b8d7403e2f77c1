#ifndef SUBHC_GRAPH_HPP
#define SUBHC_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subhc/types.hpp"

namespace subhc {

template <typename Scalar>
struct BasicEdge {
  Vertex u;
  Vertex v;
  Scalar w;
};

template <typename Scalar>
struct BasicNeighbor {
  Vertex v;
  Scalar w;
};

/// Weighted undirected multigraph on vertices 0..n-1.
///
/// Immutable after construction. Adjacency lists are ordered by (weight, neighbor id),
/// which is both the weight-sorted order of the weighted query model and plain id order
/// when all weights are equal.
template <typename Scalar>
class BasicGraph {
 public:
  using scalar_type = Scalar;
  using Edge = BasicEdge<Scalar>;
  using Neighbor = BasicNeighbor<Scalar>;

  BasicGraph() = default;

  BasicGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), adj_(n) {
    for (const Edge& e : edges_) {
      if (e.u >= n_ || e.v >= n_) throw DomainError("edge endpoint out of range");
      if (e.u == e.v) throw DomainError("self loop");
      if (!(e.w > Scalar(0))) throw DomainError("edge weight must be positive");
      adj_[e.u].push_back({e.v, e.w});
      adj_[e.v].push_back({e.u, e.w});
    }
    for (auto& list : adj_) {
      std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.w < b.w || (a.w == b.w && a.v < b.v);
      });
    }
  }

  /// Builds a graph in which parallel edges are merged by adding their weights.
  static BasicGraph merged(std::size_t n, const std::vector<Edge>& edges) {
    std::map<std::pair<Vertex, Vertex>, Scalar> acc;
    for (const Edge& e : edges) {
      auto key = std::minmax(e.u, e.v);
      auto [it, inserted] = acc.try_emplace({key.first, key.second}, e.w);
      if (!inserted) it->second += e.w;
    }
    std::vector<Edge> out;
    out.reserve(acc.size());
    for (const auto& [key, w] : acc) out.push_back({key.first, key.second, w});
    return BasicGraph(n, std::move(out));
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Neighbor> adjacency(Vertex v) const { return adj_.at(v); }
  std::size_t degree(Vertex v) const { return adj_.at(v).size(); }

  Scalar total_weight() const {
    Scalar s(0);
    for (const Edge& e : edges_) s += e.w;
    return s;
  }

  bool unit_weights() const {
    return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.w == Scalar(1); });
  }

  template <typename Other>
  BasicGraph<Other> cast() const {
    std::vector<BasicEdge<Other>> out;
    out.reserve(edges_.size());
    for (const Edge& e : edges_) out.push_back({e.u, e.v, Other(e.w)});
    return BasicGraph<Other>(n_, std::move(out));
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adj_;
};

using Graph = BasicGraph<double>;
using Edge = Graph::Edge;
using RationalGraph = BasicGraph<Rational>;

/// A vertex subset: sorted, duplicate-free ids. Bitmask construction is the n <= 64 fast path.
class Cut {
 public:
  Cut() = default;
  Cut(std::initializer_list<Vertex> ids) : Cut(std::vector<Vertex>(ids)) {}
  explicit Cut(std::vector<Vertex> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }
  static Cut from_mask(std::uint64_t mask) {
    std::vector<Vertex> ids;
    for (Vertex v = 0; v < 64; ++v)
      if (mask >> v & 1U) ids.push_back(v);
    return Cut(std::move(ids));
  }

  const std::vector<Vertex>& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  /// Membership vector over 0..n-1; throws DomainError on ids >= n.
  std::vector<char> membership(std::size_t n) const {
    std::vector<char> in(n, 0);
    for (Vertex v : ids_) {
      if (v >= n) throw DomainError("vertex id " + std::to_string(v) + " out of range");
      in[v] = 1;
    }
    return in;
  }

 private:
  std::vector<Vertex> ids_;
};

/// w_G(S): total weight of edges with exactly one endpoint in S.
template <typename Scalar>
Scalar cut_weight(const BasicGraph<Scalar>& g, const Cut& s) {
  const auto in = s.membership(g.n());
  Scalar total(0);
  for (const auto& e : g.edges())
    if (in[e.u] != in[e.v]) total += e.w;
  return total;
}

template <typename Scalar>
Scalar cut_weight_mask(const BasicGraph<Scalar>& g, std::uint64_t mask) {
  Scalar total(0);
  for (const auto& e : g.edges())
    if (((mask >> e.u) ^ (mask >> e.v)) & 1U) total += e.w;
  return total;
}

/// w_G(S, T) by direct enumeration of the edges between two disjoint sets.
template <typename Scalar>
Scalar cross_weight(const BasicGraph<Scalar>& g, const Cut& s, const Cut& t) {
  auto in_s = s.membership(g.n());
  auto in_t = t.membership(g.n());
  for (std::size_t v = 0; v < g.n(); ++v)
    if (in_s[v] && in_t[v]) throw DomainError("cross_weight: sets are not disjoint");
  Scalar total(0);
  for (const auto& e : g.edges())
    if ((in_s[e.u] && in_t[e.v]) || (in_s[e.v] && in_t[e.u])) total += e.w;
  return total;
}

/// w_G(S, T) through three global cuts: (w(S) + w(T) - w(S u T)) / 2.
template <typename Scalar>
Scalar cross_weight_via_cuts(const BasicGraph<Scalar>& g, const Cut& s, const Cut& t) {
  std::vector<Vertex> both = s.ids();
  both.insert(both.end(), t.ids().begin(), t.ids().end());
  const Cut u(both);
  if (u.size() != s.size() + t.size()) throw DomainError("cross_weight: sets are not disjoint");
  return (cut_weight(g, s) + cut_weight(g, t) - cut_weight(g, u)) / Scalar(2);
}

/// Induced subgraph on `ids` (local id i <-> ids[i]).
template <typename Scalar>
BasicGraph<Scalar> induced_subgraph(const BasicGraph<Scalar>& g, std::span<const Vertex> ids) {
  std::vector<std::int64_t> local(g.n(), -1);
  for (std::size_t i = 0; i < ids.size(); ++i) local[ids[i]] = static_cast<std::int64_t>(i);
  std::vector<BasicEdge<Scalar>> out;
  for (const auto& e : g.edges()) {
    if (local[e.u] >= 0 && local[e.v] >= 0)
      out.push_back({static_cast<Vertex>(local[e.u]), static_cast<Vertex>(local[e.v]), e.w});
  }
  return BasicGraph<Scalar>(ids.size(), std::move(out));
}

/// Connected components as a label per vertex, labels 0..k-1 in order of first vertex.
template <typename Scalar>
std::vector<std::size_t> component_labels(const BasicGraph<Scalar>& g, std::size_t* count = nullptr) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(g.n(), unset);
  std::size_t next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (const auto& nb : g.adjacency(x))
        if (label[nb.v] == unset) {
          label[nb.v] = next;
          stack.push_back(nb.v);
        }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

/// Reads "u v" / "u v w" lines ('#' comments). n is inferred as max id + 1 unless given.
Graph read_edge_list(std::istream& in, std::optional<std::size_t> n = std::nullopt);
Graph read_edge_list_file(const std::string& path, std::optional<std::size_t> n = std::nullopt);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace subhc

#endif  // SUBHC_GRAPH_HPP
