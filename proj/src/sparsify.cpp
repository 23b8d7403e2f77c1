#include "subhc/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_map>

namespace subhc {
namespace {

constexpr std::uint64_t kChunk = std::uint64_t{1} << 14;

// Runs body(chunk, rng) for every chunk of [0, q); chunk c always gets the same RNG stream, so the
// merged result does not depend on how chunks are spread over workers.
template <typename Local, typename Body>
std::vector<Local> for_each_chunk(std::uint64_t q, std::uint64_t seed, std::size_t threads, Body body) {
  const std::uint64_t chunks = (q + kChunk - 1) / kChunk;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(threads, chunks));
  std::vector<Local> locals(workers);
  auto run = [&](std::size_t w) {
    for (std::uint64_t c = w; c < chunks; c += workers) {
      Rng rng(derive_seed(seed, 0x5a3, c));
      const std::uint64_t count = std::min(kChunk, q - c * kChunk);
      body(locals[w], count, rng);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  return locals;
}

std::uint64_t pair_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (std::uint64_t{u} << 32) | v;
}

// Edges of one weight class, re-indexed 1..d_i(v) on top of the weight-sorted oracle.
class ClassView final : public GraphAccess {
 public:
  ClassView(QueryOracle& o, std::vector<std::size_t> lo, std::vector<std::size_t> deg)
      : o_(o), lo_(std::move(lo)), deg_(std::move(deg)) {}
  std::size_t vertex_count() const override { return o_.vertex_count(); }
  std::size_t degree(Vertex v) override { return deg_.at(v); }
  Vertex neighbor(Vertex v, std::size_t i) override {
    if (i < 1 || i > deg_.at(v)) throw DomainError("class neighbour index out of range");
    return o_.neighbor(v, lo_[v] + i - 1);
  }
  std::span<const std::size_t> degrees() const { return deg_; }

 private:
  QueryOracle& o_;
  std::vector<std::size_t> lo_;
  std::vector<std::size_t> deg_;
};

}  // namespace

void SparsifyPlan::validate() const {
  if (!(eps > 0.0 && eps <= 0.5)) throw DomainError("eps must lie in (0, 1/2]");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw DomainError("c1 and c2 must be positive");
  if (expander_degree < 2 || expander_degree % 2 != 0) throw DomainError("expander degree must be even and >= 2");
  if (threads == 0) throw DomainError("threads must be >= 1");
}

double SparsifyPlan::eps_prime(std::size_t n) const {
  if (n < 3) return eps;
  return std::min(eps, eps * std::sqrt(delta / (c1 * std::log(static_cast<double>(n)))));
}

std::uint64_t SparsifyPlan::samples(std::size_t n) const {
  const double e = eps_prime(n);
  const double ln = n < 2 ? 0.0 : std::log(static_cast<double>(n));
  const double raw = std::ceil(c2 * static_cast<double>(n) * ln / (e * e));
  if (!(raw < static_cast<double>(max_samples))) return max_samples;
  return std::max<std::uint64_t>(n, static_cast<std::uint64_t>(raw));
}

Graph sparsify_core(const Graph& h, std::span<const double> p, std::uint64_t q, std::uint64_t seed, std::size_t threads) {
  const auto edges = h.edges();
  if (p.size() != edges.size()) throw DomainError("distribution size differs from edge count");
  if (q < 1) throw DomainError("q must be >= 1");
  if (q > SparsifyPlan::max_samples) throw DomainError("q too large");
  std::vector<double> cdf(p.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0)) throw DomainError("negative or NaN probability");
    total += p[i];
    cdf[i] = total;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("probabilities do not sum to 1");

  using Counts = std::vector<std::uint64_t>;
  auto locals = for_each_chunk<Counts>(q, seed, threads, [&](Counts& counts, std::uint64_t k, Rng& rng) {
    if (counts.empty()) counts.assign(edges.size(), 0);
    for (std::uint64_t s = 0; s < k; ++s) {
      const double r = uniform01(rng) * total;
      auto i = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
      if (i == cdf.size()) --i;
      while (i > 0 && p[i] == 0.0) --i;  // r landed on a boundary next to zero-mass entries
      ++counts[i];
    }
  });

  std::vector<Edge> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::uint64_t c = 0;
    for (const auto& l : locals)
      if (!l.empty()) c += l[i];
    if (c) out.push_back({edges[i].u, edges[i].v, static_cast<double>(c) * edges[i].w / (static_cast<double>(q) * p[i])});
  }
  return Graph::merged(h.n(), out);
}

EdgeSample rejection_sample_edge(GraphAccess& o, std::span<const std::size_t> degrees, const ExpanderGraph& x, Rng& rng) {
  const std::size_t n = o.vertex_count();
  if (degrees.size() != n || x.n() != n) throw DomainError("degree table or expander does not match the graph");
  const double D = x.weighted_degree();
  EdgeSample s;
  s.u = static_cast<Vertex>(uniform_below(rng, n));
  const auto du = static_cast<double>(degrees[s.u]);
  if (uniform01(rng) * (du + D) < du) {
    s.v = o.neighbor(s.u, 1 + uniform_below(rng, degrees[s.u]));
    s.source = EdgeSample::Source::input;
    s.p = composite_edge_probability<double>(1.0, du, static_cast<double>(degrees[s.v]), n, D);
  } else {
    s.v = x.slot_neighbor(s.u, uniform_below(rng, x.degree()));
    s.source = EdgeSample::Source::expander;
    s.p = composite_edge_probability<double>(x.edge_weight(), du, static_cast<double>(degrees[s.v]), n, D);
  }
  return s;
}

Graph eps_delta_sparsify(GraphAccess& o, const SparsifyPlan& plan, std::span<const std::size_t> degrees) {
  plan.validate();
  const std::size_t n = o.vertex_count();
  std::vector<std::size_t> fetched;
  if (degrees.empty()) {
    fetched.resize(n);
    for (Vertex v = 0; v < n; ++v) fetched[v] = o.degree(v);
    degrees = fetched;
  } else if (degrees.size() != n) {
    throw DomainError("degree table size differs from n");
  }
  const auto x = build_expander(n, plan.expander_degree, derive_seed(plan.seed, 0xe49), plan.expander_edge_weight());
  const std::uint64_t q = plan.samples(n);

  // w_e / p_e is the same for an input edge and an expander edge on the same pair, so per-pair
  // draw counts are all that is needed.
  using Counts = std::unordered_map<std::uint64_t, std::uint64_t>;
  auto locals = for_each_chunk<Counts>(q, plan.seed, plan.threads, [&](Counts& counts, std::uint64_t k, Rng& rng) {
    for (std::uint64_t s = 0; s < k; ++s) {
      const auto e = rejection_sample_edge(o, degrees, x, rng);
      ++counts[pair_key(e.u, e.v)];
    }
  });
  Counts total;
  for (const auto& l : locals)
    for (const auto& [k, c] : l) total[k] += c;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(total.begin(), total.end());
  std::sort(sorted.begin(), sorted.end());

  const double D = x.weighted_degree();
  std::vector<Edge> out;
  out.reserve(sorted.size());
  for (const auto& [k, c] : sorted) {
    const auto u = static_cast<Vertex>(k >> 32), v = static_cast<Vertex>(k & 0xffffffffu);
    const double z = 1.0 / (static_cast<double>(degrees[u]) + D) + 1.0 / (static_cast<double>(degrees[v]) + D);
    out.push_back({u, v, static_cast<double>(c) * static_cast<double>(n) / (static_cast<double>(q) * z)});
  }
  return Graph(n, std::move(out));
}

WeightedSparsifyResult weighted_sparsify(QueryOracle& o, double eps, const SparsifyPlan& base) {
  if (!(eps > 0.0 && eps <= 1.0 / 3.0)) throw DomainError("eps must lie in (0, 1/3]");
  if (o.variant() != QueryOracle::Variant::weight_sorted) throw DomainError("weighted_sparsify needs the weight-sorted oracle");
  const std::size_t n = o.vertex_count();
  std::vector<std::size_t> deg(n);
  double wmax = 1.0;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = o.degree(v);
    if (!deg[v]) continue;
    if (o.weighted_neighbor(v, 1).second < 1.0) throw DomainError("edge weights must be >= 1");
    wmax = std::max(wmax, o.weighted_neighbor(v, deg[v]).second);
  }
  const std::size_t classes = weight_class_of(wmax, eps);
  const double n43 = std::pow(static_cast<double>(n), 4.0 / 3.0);

  WeightedSparsifyResult result;
  std::vector<Edge> all;
  std::vector<std::size_t> lo(n, 1), next(n);
  for (std::size_t i = 1; i <= classes; ++i) {
    const double upper = weight_class_floor(eps, i + 1);
    std::size_t twice_m = 0;
    std::vector<std::size_t> di(n);
    for (Vertex v = 0; v < n; ++v) {
      next[v] = lo[v] > deg[v] ? lo[v] : first_index_at_least(o, v, deg[v], upper);
      di[v] = next[v] - lo[v];
      twice_m += di[v];
    }
    const std::size_t mi = twice_m / 2;
    if (mi > 0) {
      WeightClassReport rep;
      rep.index = i;
      rep.edges = mi;
      rep.alpha = static_cast<double>(mi) / n43;
      if (rep.alpha <= 1.0) {
        rep.read_fully = true;
        for (Vertex v = 0; v < n; ++v)
          for (std::size_t j = lo[v]; j < next[v]; ++j) {
            const auto [u, w] = o.weighted_neighbor(v, j);
            if (v < u) all.push_back({v, u, w});
          }
      } else {
        rep.delta = eps * std::min(rep.alpha * rep.alpha / std::cbrt(static_cast<double>(n)), 1.0);
        rep.scale = std::pow(1.0 + eps, static_cast<double>(i));
        SparsifyPlan plan = base;
        plan.eps = eps;
        plan.delta = rep.delta;
        plan.seed = weight_class_seed(base.seed, i);
        ClassView view(o, lo, di);
        const Graph gi = eps_delta_sparsify(view, plan, view.degrees());
        for (const auto& e : gi.edges()) all.push_back({e.u, e.v, e.w * rep.scale});
      }
      result.classes.push_back(rep);
    }
    lo = next;
  }
  result.graph = Graph::merged(n, all);
  return result;
}

DeltaChoice pick_delta_for_hc(std::size_t n, std::size_t m, double eps) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (m == 0) return {0.0, true};
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  DeltaChoice c;
  c.delta = std::min(1.0, eps * 4.0 * md * md / (3.0 * nd * nd * nd));
  // m <= n^(4/3)  <=>  m^3 <= n^4, compared exactly while it fits in 128 bits
  if (m < (std::size_t{1} << 40) && n < (std::size_t{1} << 30)) {
    const auto m3 = static_cast<unsigned __int128>(m) * m * m;
    const auto n4 = static_cast<unsigned __int128>(n) * n * n * n;
    c.read_all = m3 <= n4;
  } else {
    c.read_all = md <= std::pow(nd, 4.0 / 3.0);
  }
  return c;
}

}  // namespace subhc
