#ifndef SUBHC_COST_HPP
#define SUBHC_COST_HPP

#include <cstdint>
#include <vector>

#include "subhc/graph.hpp"
#include "subhc/hctree.hpp"

namespace subhc {

// Dasgupta cost in three formulations. All three validate that the tree's leaves are
// exactly the graph's vertices and agree exactly in rational arithmetic.

/// Sum over edges of w_ij times the leaf count of the subtree rooted at lca(i, j).
/// The main-path evaluator: one bottom-up depth pass, then a parent climb per edge.
template <typename Scalar>
Scalar cost_edge_form(const BasicGraph<Scalar>& g, const HCTree& t) {
  t.validate(g.n());
  const auto& nodes = t.nodes();
  std::vector<std::uint32_t> depth(nodes.size(), 0);
  std::vector<std::int32_t> stack{t.root()};
  while (!stack.empty()) {
    const auto id = stack.back();
    stack.pop_back();
    const auto& x = nodes[id];
    if (!x.is_leaf()) {
      depth[x.left] = depth[x.right] = depth[id] + 1;
      stack.push_back(x.left);
      stack.push_back(x.right);
    }
  }
  const auto leaf = t.leaf_index();
  Scalar total(0);
  for (const auto& e : g.edges()) {
    auto a = leaf[e.u];
    auto b = leaf[e.v];
    while (a != b) {
      if (depth[a] >= depth[b])
        a = nodes[a].parent;
      else
        b = nodes[b].parent;
    }
    total += e.w * Scalar(static_cast<long long>(nodes[a].size));
  }
  return total;
}

/// Sum over splits S -> (S_l, S_r) of |S| * w_G(S_l, S_r).
template <typename Scalar>
Scalar cost_split_form(const BasicGraph<Scalar>& g, const HCTree& t) {
  t.validate(g.n());
  Scalar total(0);
  for (auto id : t.internal_nodes()) {
    const auto& x = t.node(id);
    const Cut left(t.leaves_under(x.left));
    const Cut right(t.leaves_under(x.right));
    total += Scalar(static_cast<long long>(x.size)) * cross_weight(g, left, right);
  }
  return total;
}

/// Cost as a non-negative combination of global cuts:
/// (1/2) [ sum_splits (|S_r| w(S_l) + |S_l| w(S_r)) + sum_v w({v}) ].
template <typename Scalar>
Scalar cost_cut_form(const BasicGraph<Scalar>& g, const HCTree& t) {
  t.validate(g.n());
  Scalar total(0);
  for (auto id : t.internal_nodes()) {
    const auto& x = t.node(id);
    const auto& l = t.node(x.left);
    const auto& r = t.node(x.right);
    total += Scalar(static_cast<long long>(r.size)) * cut_weight(g, Cut(t.leaves_under(x.left)));
    total += Scalar(static_cast<long long>(l.size)) * cut_weight(g, Cut(t.leaves_under(x.right)));
  }
  for (Vertex v = 0; v < g.n(); ++v) total += cut_weight(g, Cut{v});
  return total / Scalar(2);
}

/// Universal lower bound 4 m^2 / (3 n) on the cost of any hierarchy of an unweighted graph.
inline Rational hc_cost_lower_bound(std::uint64_t n, std::uint64_t m) {
  if (n == 0) throw DomainError("hc_cost_lower_bound: n = 0");
  using boost::multiprecision::cpp_int;
  return Rational(cpp_int(4) * cpp_int(m) * cpp_int(m), cpp_int(3) * cpp_int(n));
}

}  // namespace subhc

#endif  // SUBHC_COST_HPP
