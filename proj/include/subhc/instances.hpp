#ifndef SUBHC_INSTANCES_HPP
#define SUBHC_INSTANCES_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "subhc/graph.hpp"

namespace subhc {

/// Uniform permutation of 0..n-1 (Fisher-Yates over uniform_below).
std::vector<Vertex> random_permutation(std::size_t n, Rng& rng);

Graph complete_graph(std::size_t n);
Graph gen_gnp(std::size_t n, double p, std::uint64_t seed);
Graph gen_gnm(std::size_t n, std::size_t m, std::uint64_t seed);

/// r vertex-disjoint cliques of size s on a random subset of labels; the other n - r*s vertices
/// stay isolated.
Graph gen_clique_union(std::size_t n, std::size_t s, std::size_t r, std::uint64_t seed);
/// s = round(n^gamma), r = round(n^(1-gamma)), r lowered until r*s <= n.
Graph gen_clique_union(std::size_t n, double gamma, std::uint64_t seed);

struct HiddenMatchingInstance {
  Graph graph;
  std::size_t clique_size = 0;
  std::size_t t = 0;
  std::vector<std::size_t> group;  // clique of each vertex, or npos for isolated vertices
  std::vector<std::pair<std::size_t, std::size_t>> meta_matching;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// r cliques of size s (r even), paired by a random perfect matching. Each pair gets a random
/// bipartite matching of size 2t across, and a random perfect matching on the 2t touched vertices
/// of each side is removed from its clique, so every degree stays s - 1. Requires 2t <= s.
HiddenMatchingInstance gen_hidden_matching(std::size_t n, std::size_t s, std::size_t r, std::size_t t, std::uint64_t seed);
/// s and r as for clique unions (r rounded down to even), t = round(n^(max(0, 3 gamma - 1) + 1/sqrt(ln n))).
HiddenMatchingInstance gen_hidden_matching(std::size_t n, double gamma, std::uint64_t seed);

struct BicliqueInstance {
  Graph graph;                          // 2n vertices
  std::vector<Vertex> part1, part2;     // V1 and V2 (labels after permutation)
  std::vector<std::vector<Edge>> tiles;  // edge-disjoint, union is G[V1], each isomorphic to G[V2]
  std::size_t small_size = 0;           // vertices per V2 biclique (b)
  std::size_t tile_count = 0;           // k
};

/// V1: bicliques with k*b/2 vertices per side, V2: bicliques with b/2 per side, both with as
/// many copies as fit into n vertices (V2 gets k times as many). b must be even.
BicliqueInstance gen_mpc_bicliques(std::size_t n, std::size_t b, std::size_t k, std::uint64_t seed);
/// b = n^(1/3 - eps) rounded to an even number >= 2, k = round(n^(1/3)).
BicliqueInstance gen_mpc_bicliques(std::size_t n, double eps, std::uint64_t seed);

}  // namespace subhc

#endif  // SUBHC_INSTANCES_HPP
