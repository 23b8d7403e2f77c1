// Independent oracles shared by the test suites: brute-force cut enumeration, naive tree
// costs and exhaustive tree enumeration. None of these call the code they are used to check.
#pragma once

#include <cstdint>
#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "subhc/graph.hpp"
#include "subhc/hctree.hpp"
#include "subhc/instances.hpp"
#include "subhc/stream.hpp"

namespace subhc::testing {

/// Unit-weight G(n, p) that does not go through the library generators.
inline Graph bernoulli_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v, 1.0});
  return Graph(n, edges);
}

/// Integer weights in [1, wmax].
inline Graph weighted_bernoulli_graph(std::size_t n, double p, int wmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::uniform_int_distribution<int> wd(1, wmax);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v, static_cast<double>(wd(rng))});
  return Graph(n, edges);
}

template <typename Scalar>
Scalar mask_cut(const BasicGraph<Scalar>& g, std::uint64_t mask) {
  Scalar total(0);
  for (const auto& e : g.edges())
    if (((mask >> e.u) & 1U) != ((mask >> e.v) & 1U)) total += e.w;
  return total;
}

/// Calls f(mask, |S|) once per nontrivial cut {S, S^c}, taking S as the side without vertex 0.
/// n <= 20.
inline void for_each_cut(std::size_t n, const std::function<void(std::uint64_t, std::size_t)>& f) {
  const std::uint64_t half = std::uint64_t{1} << (n - 1);
  for (std::uint64_t s = 1; s < half; ++s) f(s << 1, static_cast<std::size_t>(__builtin_popcountll(s)));
}

/// Number of cuts violating lo*w(S) <= w'(S) <= hi*w(S) + slack*min(|S|, |S^c|).
inline std::size_t cut_band_violations(const Graph& g, const Graph& h, double lo, double hi, double slack) {
  std::size_t bad = 0;
  const std::size_t n = g.n();
  for_each_cut(n, [&](std::uint64_t mask, std::size_t k) {
    const double w = mask_cut(g, mask), wh = mask_cut(h, mask);
    const double small = static_cast<double>(std::min(k, n - k));
    if (wh < lo * w - 1e-9 || wh > hi * w + slack * small + 1e-9) ++bad;
  });
  return bad;
}

/// Leaf bitmask of every internal node (n <= 64).
inline std::vector<std::uint64_t> internal_masks(const HCTree& t) {
  std::vector<std::uint64_t> out;
  for (std::size_t id = 0; id < t.nodes().size(); ++id) {
    if (t.nodes()[id].is_leaf()) continue;
    std::uint64_t m = 0;
    for (Vertex v : t.leaves_under(static_cast<std::int32_t>(id))) m |= std::uint64_t{1} << v;
    out.push_back(m);
  }
  return out;
}

/// Dasgupta cost by definition: each edge pays the size of the smallest cluster holding both ends.
template <typename Scalar>
Scalar naive_cost(const BasicGraph<Scalar>& g, const HCTree& t) {
  const auto masks = internal_masks(t);
  Scalar total(0);
  for (const auto& e : g.edges()) {
    const std::uint64_t both = (std::uint64_t{1} << e.u) | (std::uint64_t{1} << e.v);
    int best = 65;
    for (auto m : masks)
      if ((m & both) == both) best = std::min(best, __builtin_popcountll(m));
    total += e.w * Scalar(best);
  }
  return total;
}

/// Every full binary tree over the vertices of `mask` (unordered children; (2k-3)!! trees).
inline std::vector<HCTree> all_trees(std::uint64_t mask) {
  if (__builtin_popcountll(mask) == 1) return {HCTree::single(static_cast<Vertex>(__builtin_ctzll(mask)))};
  std::vector<HCTree> out;
  const std::uint64_t low = mask & (~mask + 1);
  const std::uint64_t rest = mask ^ low;
  // left side always holds the lowest vertex; enumerate its other members
  for (std::uint64_t sub = rest;; sub = (sub - 1) & rest) {
    const std::uint64_t a = sub | low, b = mask ^ a;
    if (b) {
      const auto left = all_trees(a), right = all_trees(b);
      for (const auto& l : left)
        for (const auto& r : right) out.push_back(HCTree::join(l, r));
    }
    if (sub == 0) break;
  }
  return out;
}

/// Inserts every edge of g plus as many extra pairs, then deletes the extras, all interleaved.
inline std::vector<StreamEvent> churn_stream(const Graph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = g.n();
  std::set<std::pair<Vertex, Vertex>> present;
  for (const auto& e : g.edges()) present.insert({e.u, e.v});
  std::vector<std::pair<Vertex, Vertex>> extra;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!present.count({u, v})) extra.push_back({u, v});
  std::shuffle(extra.begin(), extra.end(), rng);
  extra.resize(std::min(extra.size(), g.m()));

  std::vector<StreamEvent> ins;
  for (const auto& e : g.edges()) ins.push_back({StreamEvent::Op::insert, e.u, e.v, 1.0});
  for (const auto& [u, v] : extra) ins.push_back({StreamEvent::Op::insert, v, u, 1.0});
  std::shuffle(ins.begin(), ins.end(), rng);
  // each extra pair is deleted at a random point after its insertion
  std::vector<StreamEvent> out;
  std::vector<StreamEvent> pending;
  for (const auto& e : ins) {
    out.push_back(e);
    if (!present.count({std::min(e.u, e.v), std::max(e.u, e.v)})) pending.push_back({StreamEvent::Op::erase, e.u, e.v, 1.0});
    if (!pending.empty() && rng() % 3 == 0) {
      const auto i = rng() % pending.size();
      out.push_back(pending[i]);
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  out.insert(out.end(), pending.begin(), pending.end());
  return out;
}

}  // namespace subhc::testing
