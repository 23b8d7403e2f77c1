#ifndef SUBHC_SPARSIFY_HPP
#define SUBHC_SPARSIFY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "subhc/expander.hpp"
#include "subhc/graph.hpp"
#include "subhc/oracle.hpp"

namespace subhc {

/// Parameters of the (eps, delta)-sparsifier. Only the product c1*c2 affects q.
struct SparsifyPlan {
  double eps = 0.5;
  double delta = 1.0;
  double c1 = 1.0;
  double c2 = 2.0;
  std::size_t expander_degree = 16;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void validate() const;
  /// eps * sqrt(delta / (c1 ln n)), never above eps.
  double eps_prime(std::size_t n) const;
  /// ceil(c2 n ln n / eps'^2), clamped to [n, max_samples].
  std::uint64_t samples(std::size_t n) const;
  /// Each expander edge weighs 2*delta/d, so every vertex's expander weighted degree is 2*delta.
  double expander_edge_weight() const { return 2.0 * delta / static_cast<double>(expander_degree); }

  static constexpr std::uint64_t max_samples = std::uint64_t{1} << 36;
};

/// p_e = (w_e/n) (1/(d(u)+D) + 1/(d(v)+D)) where D is the expander weighted degree.
template <typename Scalar>
Scalar composite_edge_probability(const Scalar& w, const Scalar& du, const Scalar& dv, std::size_t n, const Scalar& D) {
  return w / Scalar(n) * (Scalar(1) / (du + D) + Scalar(1) / (dv + D));
}

/// Sampling probabilities over the composite G ∪ G_x: input edges first (in g.edges() order),
/// then expander edges (in x.edges() order).
template <typename Scalar>
std::vector<Scalar> sampling_probabilities(const BasicGraph<Scalar>& g, const std::vector<BasicEdge<Scalar>>& expander_edges,
                                           const Scalar& expander_weighted_degree) {
  std::vector<Scalar> p;
  p.reserve(g.m() + expander_edges.size());
  const std::size_t n = g.n();
  auto deg = [&](Vertex v) { return Scalar(static_cast<long long>(g.degree(v))); };
  for (const auto& e : g.edges())
    p.push_back(composite_edge_probability<Scalar>(Scalar(1), deg(e.u), deg(e.v), n, expander_weighted_degree));
  for (const auto& e : expander_edges)
    p.push_back(composite_edge_probability<Scalar>(e.w, deg(e.u), deg(e.v), n, expander_weighted_degree));
  return p;
}

/// Importance sampling over an explicit graph: q draws from p (indexed like h.edges()); each
/// draw of e adds w_e/(q p_e). Parallel output edges merge by weight addition.
Graph sparsify_core(const Graph& h, std::span<const double> p, std::uint64_t q, std::uint64_t seed, std::size_t threads = 1);

struct EdgeSample {
  enum class Source { input, expander };
  Vertex u = 0;
  Vertex v = 0;
  Source source = Source::input;
  double p = 0.0;  // a draw adds w_e / (q p) to the pair
};

/// One draw of the composite distribution: uniform u, then a coin with bias d(u)/(d(u)+D)
/// choosing a uniform input neighbour (one oracle query) or a uniform expander slot.
EdgeSample rejection_sample_edge(GraphAccess& o, std::span<const std::size_t> degrees, const ExpanderGraph& x, Rng& rng);

/// (eps, delta)-cut sparsifier of the graph behind `o`, overlaid with an expander of weighted degree
/// 2*delta and sampled by rejection. Prefetches all n degrees (n queries) unless `degrees` is given.
Graph eps_delta_sparsify(GraphAccess& o, const SparsifyPlan& plan, std::span<const std::size_t> degrees = {});

struct WeightClassReport {
  std::size_t index = 0;  // class i covers [(1+eps)^(i-1), (1+eps)^i)
  std::size_t edges = 0;
  double alpha = 0.0;     // m_i / n^(4/3)
  bool read_fully = false;
  double delta = 0.0;     // 0 when read fully
  double scale = 1.0;     // W_i when sparsified
};

struct WeightedSparsifyResult {
  Graph graph;
  std::vector<WeightClassReport> classes;
};

/// Weighted variant: weights are bucketed into classes [(1+eps)^(i-1), (1+eps)^i); sparse classes
/// are read in full, dense ones sparsified with their own delta_i and scaled by (1+eps)^i.
/// `base` supplies c1, c2, d, seed and threads; its eps and delta are ignored.
WeightedSparsifyResult weighted_sparsify(QueryOracle& o, double eps, const SparsifyPlan& base);

struct DeltaChoice {
  double delta = 0.0;
  bool read_all = false;
};

/// Seed of class i's sparsifier inside weighted_sparsify.
inline std::uint64_t weight_class_seed(std::uint64_t seed, std::size_t i) { return derive_seed(seed, 0xc1a55, i); }

/// delta = min(1, eps * 4m^2 / (3n^3)); read the whole graph when m <= n^(4/3).
DeltaChoice pick_delta_for_hc(std::size_t n, std::size_t m, double eps);

}  // namespace subhc

#endif  // SUBHC_SPARSIFY_HPP
