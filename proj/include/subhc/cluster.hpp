#ifndef SUBHC_CLUSTER_HPP
#define SUBHC_CLUSTER_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subhc/cost.hpp"
#include "subhc/graph.hpp"
#include "subhc/hctree.hpp"
#include "subhc/oracle.hpp"
#include "subhc/sparsify.hpp"

namespace subhc {

/// Strategy that splits an induced subgraph in two. The recursive driver checks that the
/// returned side is a proper, nonempty subset.
class CutOracle {
 public:
  virtual ~CutOracle() = default;
  /// One side of the split, as local ids of `sub`.
  virtual Cut split(const Graph& sub) = 0;
  virtual std::string name() const = 0;
  /// Declared approximation factor; informational only, 0 when unknown.
  virtual double phi() const { return 0.0; }
  /// Whether splits of connected subgraphs keep both sides >= |S|/3.
  virtual bool balanced() const { return false; }
};

/// Fiedler sweep restricted to sweep positions [ceil(|S|/3), floor(2|S|/3)], minimizing
/// w(A, B) / (|A| |B|). A disconnected graph is split into the grouping of whole components
/// closest to |S|/2. Deterministic.
Cut spectral_bisect(const Graph& g);

/// Fiedler vector of the normalized Laplacian, mapped back through D^(-1/2). Dense
/// eigensolver up to `dense_limit` vertices, deflated power iteration above it.
std::vector<double> fiedler_vector(const Graph& g, std::size_t dense_limit = 256);

class SpectralCutOracle final : public CutOracle {
 public:
  Cut split(const Graph& sub) override { return spectral_bisect(sub); }
  std::string name() const override { return "spectral"; }
  bool balanced() const override { return true; }
};

/// Top split of an optimal tree (n <= 14); driving recursive_hc with it reproduces exact_hc's cost.
class ExactCutOracle final : public CutOracle {
 public:
  Cut split(const Graph& sub) override;
  std::string name() const override { return "exact"; }
  double phi() const override { return 1.0; }
};

/// Top-down recursion: split, recurse on both induced subgraphs, join.
HCTree recursive_hc(const Graph& g, CutOracle& oracle);

template <typename Scalar>
struct ExactResult {
  HCTree tree;
  Scalar cost{};
};

constexpr std::size_t kExactLimit = 14;

/// Subset DP: OPT(S) = min over (A, S\A) of |S| w(A, S\A) + OPT(A) + OPT(S\A). Among equal-cost
/// splits the one whose side without S's top vertex has the smaller mask wins.
template <typename Scalar>
ExactResult<Scalar> exact_hc(const BasicGraph<Scalar>& g) {
  const std::size_t n = g.n();
  if (n == 0) throw DomainError("exact_hc needs n >= 1");
  if (n > kExactLimit) throw DomainError("exact_hc refuses n > " + std::to_string(kExactLimit));
  const std::uint32_t full = (1U << n) - 1;

  std::vector<Scalar> w(n * n, Scalar(0));
  for (const auto& e : g.edges()) {
    w[e.u * n + e.v] += e.w;
    w[e.v * n + e.u] += e.w;
  }
  // inner[S] = total weight inside S
  std::vector<Scalar> inner(full + 1, Scalar(0));
  for (std::uint32_t s = 1; s <= full; ++s) {
    const auto low = static_cast<std::size_t>(std::countr_zero(s));
    const std::uint32_t rest = s & (s - 1);
    Scalar acc = inner[rest];
    for (std::uint32_t r = rest; r; r &= r - 1) acc += w[low * n + static_cast<std::size_t>(std::countr_zero(r))];
    inner[s] = acc;
  }

  std::vector<Scalar> opt(full + 1, Scalar(0));
  std::vector<std::uint32_t> best(full + 1, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    if (std::has_single_bit(s)) continue;
    const std::uint32_t top = std::bit_floor(s);
    const std::uint32_t rest = s ^ top;
    const Scalar size(static_cast<long long>(std::popcount(s)));
    bool have = false;
    for (std::uint32_t a = rest; a; a = (a - 1) & rest) {
      const std::uint32_t b = s ^ a;
      Scalar c = size * (inner[s] - inner[a] - inner[b]) + opt[a] + opt[b];
      if (!have || c < opt[s] || (c == opt[s] && a < best[s])) {
        opt[s] = std::move(c);
        best[s] = a;
        have = true;
      }
    }
  }

  ExactResult<Scalar> out;
  out.cost = opt[full];
  auto build = [&](auto&& self, std::uint32_t s) -> std::int32_t {
    if (std::has_single_bit(s)) return out.tree.add_leaf(static_cast<Vertex>(std::countr_zero(s)));
    const std::int32_t l = self(self, best[s]);
    const std::int32_t r = self(self, s ^ best[s]);
    return out.tree.add_internal(l, r);
  };
  build(build, full);
  return out;
}

struct HcReport {
  std::size_t n = 0;
  std::size_t m = 0;
  double eps = 0.0;
  double delta = 0.0;
  std::uint64_t q = 0;  // 0 on the read-all branch
  std::uint64_t queries = 0;
  std::size_t sparsifier_edges = 0;
  bool read_all = false;
  double cost_sparsifier = 0.0;
  std::optional<double> cost_original;
  std::optional<double> ratio;  // cost_sparsifier / cost_original

  std::string to_json() const;
};

struct HcResult {
  HCTree tree;
  Graph sparsifier;
  HcReport report;
};

/// pick_delta_for_hc, then either read the whole graph (2m + n queries) or run the
/// (eps, delta)-sparsifier, then recursive_hc on the result. `base` supplies c1, c2, d and threads.
/// With `evaluate`, the hidden graph is used afterwards to score the tree.
HcResult hc_via_sparsifier(QueryOracle& o, double eps, CutOracle& oracle, std::uint64_t seed,
                           const SparsifyPlan& base = {}, bool evaluate = true);
HcResult hc_via_sparsifier(const Graph& g, double eps, CutOracle& oracle, std::uint64_t seed,
                           const SparsifyPlan& base = {});

}  // namespace subhc

#endif  // SUBHC_CLUSTER_HPP
