#include "subhc/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace subhc {
namespace {

std::size_t round_pow(std::size_t n, double e) {
  return static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), e)));
}

std::vector<Edge> relabel(const std::vector<Edge>& edges, const std::vector<Vertex>& perm) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back({perm[e.u], perm[e.v], e.w});
  return out;
}

}  // namespace

std::vector<Vertex> random_permutation(std::size_t n, Rng& rng) {
  std::vector<Vertex> p(n);
  std::iota(p.begin(), p.end(), Vertex{0});
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform_below(rng, i)]);
  return p;
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n * (n - (n ? 1 : 0)) / 2);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  return Graph(n, std::move(edges));
}

Graph gen_gnp(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  Rng rng(derive_seed(seed, 0x6e9));
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (uniform01(rng) < p) edges.push_back({u, v, 1.0});
  return Graph(n, std::move(edges));
}

Graph gen_gnm(std::size_t n, std::size_t m, std::uint64_t seed) {
  const std::uint64_t pairs = n < 2 ? 0 : std::uint64_t{n} * (n - 1) / 2;
  if (m > pairs) throw DomainError("m exceeds n(n-1)/2");
  Rng rng(derive_seed(seed, 0x6e3));
  // Floyd's sampling of m distinct pair indices.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(m * 2);
  for (std::uint64_t j = pairs - m; j < pairs; ++j) {
    const std::uint64_t t = uniform_below(rng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> idx(chosen.begin(), chosen.end());
  std::sort(idx.begin(), idx.end());
  // row u holds pairs (u, u+1..n-1); offset[u] is the index of (u, u+1)
  std::vector<std::uint64_t> offset(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) offset[u + 1] = offset[u] + (n - 1 - u);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (auto k : idx) {
    const auto u = static_cast<std::size_t>(std::upper_bound(offset.begin(), offset.end(), k) - offset.begin()) - 1;
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(u + 1 + (k - offset[u])), 1.0});
  }
  return Graph(n, std::move(edges));
}

Graph gen_clique_union(std::size_t n, std::size_t s, std::size_t r, std::uint64_t seed) {
  if (s * r > n) throw DomainError("cliques do not fit into n vertices");
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = a + 1; b < s; ++b) edges.push_back({static_cast<Vertex>(c * s + a), static_cast<Vertex>(c * s + b), 1.0});
  Rng rng(derive_seed(seed, 0xc11));
  return Graph(n, relabel(edges, random_permutation(n, rng)));
}

Graph gen_clique_union(std::size_t n, double gamma, std::uint64_t seed) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
  const std::size_t s = std::max<std::size_t>(1, round_pow(n, gamma));
  std::size_t r = round_pow(n, 1.0 - gamma);
  while (r * s > n) --r;
  return gen_clique_union(n, s, r, seed);
}

HiddenMatchingInstance gen_hidden_matching(std::size_t n, std::size_t s, std::size_t r, std::size_t t, std::uint64_t seed) {
  if (s * r > n) throw DomainError("cliques do not fit into n vertices");
  if (r % 2 != 0) throw DomainError("hidden matching needs an even number of cliques");
  if (2 * t > s) throw DomainError("hidden matching needs 2t <= clique size");
  Rng rng(derive_seed(seed, 0x41d));

  // adjacency as sets so clique edges can be deleted
  std::vector<std::vector<char>> in_clique(r, std::vector<char>(s * s, 1));
  std::vector<Edge> cross;

  HiddenMatchingInstance inst;
  inst.clique_size = s;
  inst.t = t;
  auto meta = random_permutation(r, rng);
  for (std::size_t k = 0; k + 1 < r; k += 2) {
    const std::size_t i = meta[k], j = meta[k + 1];
    inst.meta_matching.emplace_back(std::min(i, j), std::max(i, j));
    auto ti = random_permutation(s, rng);
    auto tj = random_permutation(s, rng);
    ti.resize(2 * t);
    tj.resize(2 * t);
    // ti[a] -- tj[a] is a uniformly random bipartite matching between the two touched sets
    for (std::size_t a = 0; a < 2 * t; ++a)
      cross.push_back({static_cast<Vertex>(i * s + ti[a]), static_cast<Vertex>(j * s + tj[a]), 1.0});
    for (auto [c, touched] : {std::pair{i, &ti}, std::pair{j, &tj}}) {
      auto order = random_permutation(2 * t, rng);
      for (std::size_t a = 0; a < 2 * t; a += 2) {
        const auto x = (*touched)[order[a]], y = (*touched)[order[a + 1]];
        in_clique[c][x * s + y] = in_clique[c][y * s + x] = 0;
      }
    }
  }
  std::sort(inst.meta_matching.begin(), inst.meta_matching.end());

  std::vector<Edge> edges;
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = a + 1; b < s; ++b)
        if (in_clique[c][a * s + b]) edges.push_back({static_cast<Vertex>(c * s + a), static_cast<Vertex>(c * s + b), 1.0});
  edges.insert(edges.end(), cross.begin(), cross.end());

  const auto perm = random_permutation(n, rng);
  inst.group.assign(n, HiddenMatchingInstance::npos);
  for (std::size_t v = 0; v < r * s; ++v) inst.group[perm[v]] = v / s;
  inst.graph = Graph(n, relabel(edges, perm));
  return inst;
}

HiddenMatchingInstance gen_hidden_matching(std::size_t n, double gamma, std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (n < 3) throw DomainError("n too small");
  const std::size_t s = std::max<std::size_t>(1, round_pow(n, gamma));
  std::size_t r = round_pow(n, 1.0 - gamma);
  while (r * s > n) --r;
  r -= r % 2;
  const double e = std::max(0.0, 3.0 * gamma - 1.0) + 1.0 / std::sqrt(std::log(static_cast<double>(n)));
  return gen_hidden_matching(n, s, r, round_pow(n, e), seed);
}

BicliqueInstance gen_mpc_bicliques(std::size_t n, std::size_t b, std::size_t k, std::uint64_t seed) {
  if (b < 2 || b % 2 != 0) throw DomainError("biclique size must be even and >= 2");
  if (k < 1) throw DomainError("tile count must be >= 1");
  const std::size_t big = k * b;
  const std::size_t r1 = n / big;
  const std::size_t r2 = r1 * k;
  const std::size_t hb = b / 2, hbig = big / 2;

  BicliqueInstance inst;
  inst.small_size = b;
  inst.tile_count = k;
  inst.tiles.resize(k);
  std::vector<Edge> edges;
  // Part 1 on ids [0, n): biclique c has left side c*big + [0, hbig), right side c*big + [hbig, big).
  // Left and right are cut into k groups of b/2; tile tau joins left group g with right group (g + tau) mod k.
  for (std::size_t c = 0; c < r1; ++c)
    for (std::size_t tau = 0; tau < k; ++tau)
      for (std::size_t g = 0; g < k; ++g) {
        const std::size_t h = (g + tau) % k;
        for (std::size_t a = 0; a < hb; ++a)
          for (std::size_t z = 0; z < hb; ++z) {
            const auto u = static_cast<Vertex>(c * big + g * hb + a);
            const auto v = static_cast<Vertex>(c * big + hbig + h * hb + z);
            inst.tiles[tau].push_back({u, v, 1.0});
            edges.push_back({u, v, 1.0});
          }
      }
  // Part 2 on ids [n, 2n).
  for (std::size_t c = 0; c < r2; ++c)
    for (std::size_t a = 0; a < hb; ++a)
      for (std::size_t z = 0; z < hb; ++z)
        edges.push_back({static_cast<Vertex>(n + c * b + a), static_cast<Vertex>(n + c * b + hb + z), 1.0});

  Rng rng(derive_seed(seed, 0xb1c));
  const auto perm = random_permutation(2 * n, rng);
  for (auto& tile : inst.tiles) tile = relabel(tile, perm);
  for (std::size_t v = 0; v < n; ++v) {
    inst.part1.push_back(perm[v]);
    inst.part2.push_back(perm[n + v]);
  }
  inst.graph = Graph(2 * n, relabel(edges, perm));
  return inst;
}

BicliqueInstance gen_mpc_bicliques(std::size_t n, double eps, std::uint64_t seed) {
  if (!(eps >= 0.0 && eps < 1.0 / 3.0)) throw DomainError("eps must lie in [0, 1/3)");
  const double raw = std::pow(static_cast<double>(n), 1.0 / 3.0 - eps);
  const std::size_t b = std::max<std::size_t>(2, 2 * static_cast<std::size_t>(std::llround(raw / 2.0)));
  const std::size_t k = std::max<std::size_t>(1, round_pow(n, 1.0 / 3.0));
  return gen_mpc_bicliques(n, b, k, seed);
}

}  // namespace subhc
