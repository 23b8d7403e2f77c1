// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "subhc/cluster.hpp"
#include "subhc/cost.hpp"
#include "subhc/expander.hpp"
#include "subhc/mpc.hpp"
#include "subhc/oracle.hpp"
#include "subhc/sparsify.hpp"
#include "subhc/streaming.hpp"
#include "support.hpp"

using namespace subhc;
using namespace subhc::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SparsifyPlan plan_of(double eps, double delta, std::uint64_t seed) {
  SparsifyPlan p;
  p.eps = eps;
  p.delta = delta;
  p.seed = seed;
  return p;
}

bool same_graph(const Graph& a, const Graph& b) {
  if (a.n() != b.n() || a.m() != b.m()) return false;
  for (std::size_t i = 0; i < a.m(); ++i) {
    const auto &x = a.edges()[i], &y = b.edges()[i];
    if (x.u != y.u || x.v != y.v || x.w != y.w) return false;
  }
  return true;
}

// ---- 1-3: cost facts ----------------------------------------------------------------------

Outcome cost_forms_agree() {
  std::mt19937_64 rng(1);
  int bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const double p = static_cast<double>(rng() % 101) / 100.0;
    const auto g = weighted_bernoulli_graph(n, p, 9, rng()).cast<Rational>();
    const auto t = HCTree::random(n, rng());
    const Rational a = cost_edge_form(g, t);
    bad += a != cost_split_form(g, t) || a != cost_cut_form(g, t) || a != naive_cost(g, t);
  }
  return {bad == 0, fmt("%d/200 pairs disagree", bad)};
}

Outcome clique_cost() {
  int bad = 0;
  for (long long n = 2; n <= 10; ++n) {
    const auto g = complete_graph(static_cast<std::size_t>(n)).cast<Rational>();
    const Rational want(n * n * n - n, 3);
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto t = HCTree::random(static_cast<std::size_t>(n), derive_seed(2, static_cast<std::uint64_t>(n), s));
      bad += cost_edge_form(g, t) != want || naive_cost(g, t) != want;
    }
  }
  return {bad == 0, fmt("%d/450 trees off (n^3-n)/3", bad)};
}

Outcome lower_bound_sound() {
  std::mt19937_64 rng(3);
  int bad = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    const auto g = bernoulli_graph(n, static_cast<double>(rng() % 101) / 100.0, rng()).cast<Rational>();
    bad += exact_hc(g).cost < hc_cost_lower_bound(n, g.m());
  }
  return {bad == 0, fmt("%d/500 graphs below 4m^2/(3n)", bad)};
}

// ---- 4-7: query-model sparsifier ----------------------------------------------------------

constexpr double kEps4 = 0.5, kDelta4 = 0.3;

Graph instance4(std::uint64_t seed) { return bernoulli_graph(12, 0.5, derive_seed(4, seed)); }

Outcome sparsifier_cut_bounds() {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = instance4(seed);
    QueryOracle o(g);
    const auto h = eps_delta_sparsify(o, plan_of(kEps4, kDelta4, seed));
    good += cut_band_violations(g, h, 1 - kEps4, 1 + kEps4, 3 * kDelta4) == 0;
  }
  return {good >= 99, fmt("%d/100 seeds with all 2047 cuts in band (need >= 99)", good)};
}

Outcome distortion_band() {
  std::size_t ok = 0, total = 0;
  const double n = 12, slack = 3 * n * (n + 1) * kDelta4 / 2;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = instance4(seed);
    QueryOracle o(g);
    const auto h = eps_delta_sparsify(o, plan_of(kEps4, kDelta4, seed));
    for (std::uint64_t k = 0; k < 50; ++k) {
      const auto t = HCTree::random(12, derive_seed(5, seed, k));
      const double c = naive_cost(g, t), ct = naive_cost(h, t);
      ok += ct >= (1 - kEps4) * c - 1e-9 && ct <= (1 + kEps4) * c + slack + 1e-9;
      ++total;
    }
  }
  return {ok * 100 >= total * 99, fmt("%zu/%zu (seed, tree) pairs in band (need >= 99%%)", ok, total)};
}

Outcome query_sublinearity() {
  const auto g = complete_graph(256);
  SpectralCutOracle spectral;
  QueryOracle o(g);
  const auto r = hc_via_sparsifier(o, 0.25, spectral, 6, SparsifyPlan{}, false);
  const auto queries = r.report.queries, cap = 3 * r.report.q + 256;
  const bool sub = queries < g.m(), accounted = queries <= cap;
  return {sub && accounted, fmt("queries %llu vs m %zu (%s); 3q+n = %llu (%s); delta %.3g", (unsigned long long)queries,
                                g.m(), sub ? "below" : "NOT below", (unsigned long long)cap,
                                accounted ? "within" : "exceeded", r.report.delta)};
}

Outcome probabilities_normalized() {
  std::mt19937_64 rng(7);
  int bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng() % 8;  // the expander needs n >= 3
    const Rational delta(1 + static_cast<long long>(rng() % 100), 100);
    const std::size_t d = 2 * (1 + rng() % 8);
    const auto g = bernoulli_graph(n, static_cast<double>(rng() % 101) / 100.0, rng()).cast<Rational>();
    const Rational wx = 2 * delta / Rational(static_cast<long long>(d));
    std::vector<BasicEdge<Rational>> xe;
    const auto x = build_expander(n, d, rng());
    for (const auto& e : x.edges()) xe.push_back({e.u, e.v, wx});
    Rational sum(0);
    for (const auto& p : sampling_probabilities<Rational>(g, xe, 2 * delta)) sum += p;
    bad += sum != 1;
  }
  return {bad == 0, fmt("%d/50 distributions off 1", bad)};
}

// ---- 8: sketches --------------------------------------------------------------------------

Outcome sketch_pipeline() {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = bernoulli_graph(12, 0.5, derive_seed(8, seed));
    const auto r = stream_sparsify(churn_stream(g, seed), SketchConfig::make(12, 0.5, seed));
    good += cut_band_violations(g, r.sparsifier, 0.5, 1.5, 0.0) == 0;
  }
  std::mt19937_64 rng(8);
  int linear = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = bernoulli_graph(12, 0.5, rng());
    const auto cfg = SketchConfig::make(12, 0.5, rng());
    std::vector<Edge> a, b;
    for (const auto& e : g.edges()) (rng() % 2 ? a : b).push_back(e);
    auto sa = sketch_graph(Graph(12, a), cfg);
    const auto sb = sketch_graph(Graph(12, b), cfg), sg = sketch_graph(g, cfg);
    bool same = true;
    for (Vertex v = 0; v < 12; ++v) {
      sa[v] += sb[v];
      same = same && sa[v] == sg[v];
    }
    linear += same;
  }
  return {good >= 95 && linear == 100,
          fmt("%d/100 churned streams with all cuts within 1+-0.5 (need >= 95); %d/100 additivity trials bit-exact", good,
              linear)};
}

// ---- 9-10: MPC ----------------------------------------------------------------------------

Outcome mpc_two_round() {
  SpectralCutOracle oracle;
  int identical = 0, two_rounds = 0, in_budget = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = bernoulli_graph(12, 0.5, derive_seed(9, seed));
    const auto cfg = SketchConfig::make(12, 0.5, seed);
    const auto machines = mpc_partition(g, 4, seed, 12 * VertexSketch(cfg, 0).words());
    const auto res = mpc_2round(12, machines, cfg, oracle);
    identical += same_graph(res.sparsifier, recover_sparsifier(sketch_graph(g, cfg), cfg));
    two_rounds += res.report.rounds == 2 && res.ledger.rounds() == 2;
    bool ok = true;
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t i = 0; i < 4; ++i)
        ok = ok && res.ledger.sent(i, r) <= machines[i].budget && res.ledger.received(i, r) <= machines[i].budget;
    in_budget += ok;
  }
  const auto g = bernoulli_graph(12, 0.5, 99);
  const auto cfg = SketchConfig::make(12, 0.5, 1);
  std::string violation = "none raised";
  try {
    mpc_2round(12, mpc_partition(g, 4, 1, VertexSketch(cfg, 0).words() - 1), cfg, oracle);
  } catch (const ProtocolViolation& e) {
    violation = e.what();
  }
  const bool raised = violation != "none raised";
  return {identical == 10 && two_rounds == 10 && in_budget == 10 && raised,
          fmt("bit-identical %d/10, two rounds %d/10, within budget %d/10; under budget: %s", identical, two_rounds,
              in_budget, violation.c_str())};
}

// K_12 minus a perfect matching.
Graph near_clique() {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < 12; ++u)
    for (Vertex v = u + 1; v < 12; ++v)
      if (!(u % 2 == 0 && v == u + 1)) edges.push_back({u, v, 1.0});
  return Graph(12, edges);
}

Outcome mpc_one_round() {
  SpectralCutOracle oracle;
  const auto g = near_clique();
  const double eps = 0.5, delta = one_round_delta(12, g.m());
  OneRoundOptions dense;
  dense.branch = OneRoundOptions::Branch::dense;
  std::size_t good = 0;
  constexpr std::uint64_t kRoomy = std::uint64_t{1} << 40;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto res = mpc_1round(12, g.m(), mpc_partition(g, 3, seed, kRoomy), eps, seed, oracle, dense);
    std::size_t bad = cut_band_violations(g, res.sampled, 1 - eps, 1 + eps, eps * delta);
    for_each_cut(12, [&](std::uint64_t mask, std::size_t k) {
      const double w = mask_cut(g, mask), wh = mask_cut(res.sparsifier, mask);
      const double slack = eps * delta * static_cast<double>(std::min<std::size_t>(k, 12 - k));
      bad += wh < (1 - eps) * w - slack - 1e-9 || wh > (1 + eps) * w + slack + 1e-9;
    });
    good += bad == 0;
  }

  const auto k8 = complete_graph(8);
  OneRoundOptions sampled = dense;
  sampled.C = 0.1;  // p well inside (0, 1), so sampling is exercised
  const double p = one_round_probability(8, k8.m(), eps, sampled.C);
  const std::uint64_t cut = 0b00001110;
  const double w = mask_cut(k8, cut);
  double sum = 0, sq = 0;
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) {
    const auto res = mpc_1round(8, k8.m(), mpc_partition(k8, 2, s, kRoomy), eps, s, oracle, sampled);
    const double x = mask_cut(res.sampled, cut);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / trials, se = std::sqrt((sq / trials - mean * mean) / trials);
  const bool unbiased = std::abs(mean - w) <= 3 * se;
  return {good >= 95 && unbiased, fmt("%zu/100 seeds in band (need >= 95); cut mean %.4f vs %.0f, |diff| = %.2f SE (p = %.3f)",
                                      good, mean, w, std::abs(mean - w) / se, p)};
}

// ---- 11: end to end -----------------------------------------------------------------------

Outcome end_to_end() {
  const double eps = 0.25;
  SpectralCutOracle spectral;
  double worst = 0;
  int bad = 0;
  for (int family = 0; family < 2; ++family)
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto g = family == 0 ? bernoulli_graph(64, 0.3, derive_seed(11, seed)) : complete_graph(64);
      const double full = cost_edge_form(g, recursive_hc(g, spectral));
      const auto r = hc_via_sparsifier(g, eps, spectral, seed);
      const double ratio = *r.report.cost_original / full;
      worst = std::max(worst, ratio);
      bad += ratio > 1 + 5 * eps;
    }
  return {bad == 0, fmt("%d/40 runs above 1+5eps; worst ratio %.4f", bad, worst)};
}

// ---- 12: hard instances -------------------------------------------------------------------

Outcome hard_instances() {
  int bad_degree = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = gen_hidden_matching(64, 8, 8, 2, seed);
    for (Vertex v = 0; v < inst.graph.n(); ++v) bad_degree += inst.graph.degree(v) != inst.clique_size - 1;
  }
  int bad_tiling = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = gen_mpc_bicliques(64, 4, 4, seed);
    const std::set<Vertex> v1(inst.part1.begin(), inst.part1.end());
    std::set<std::pair<Vertex, Vertex>> induced, tiled;
    for (const auto& e : inst.graph.edges())
      if (v1.count(e.u) && v1.count(e.v)) induced.insert(std::minmax(e.u, e.v));
    bool disjoint = true;
    for (const auto& tile : inst.tiles)
      for (const auto& e : tile) disjoint = tiled.insert(std::minmax(e.u, e.v)).second && disjoint;
    bad_tiling += !disjoint || tiled != induced;
  }
  return {bad_degree == 0 && bad_tiling == 0,
          fmt("%d vertex degrees != s-1 over 50 seeds; %d/50 tilings not disjoint or not covering", bad_degree,
              bad_tiling)};
}

// ---- 13: weighted pipeline ----------------------------------------------------------------

// 1-based positions [first, last] of class i in v's weight-sorted list, by a linear scan.
std::pair<std::size_t, std::size_t> scan_class(const Graph& g, Vertex v, std::size_t i, double eps) {
  const double lo = std::pow(1 + eps, static_cast<double>(i) - 1), hi = std::pow(1 + eps, static_cast<double>(i));
  const auto adj = g.adjacency(v);
  std::size_t first = 0, last = 0, below = 0;
  for (std::size_t j = 0; j < adj.size(); ++j) {
    if (adj[j].w < lo) ++below;
    if (adj[j].w >= lo && adj[j].w < hi) {
      if (!first) first = j + 1;
      last = j + 1;
    }
  }
  if (!first) return {below + 1, below};
  return {first, last};
}

Outcome weighted_pipeline() {
  const double eps = 0.25;
  std::mt19937_64 rng(13);
  std::vector<Edge> edges;
  const auto k12 = complete_graph(12);
  for (const auto& e : k12.edges()) edges.push_back({e.u, e.v, rng() % 2 ? 1.0 : 2.0});
  const Graph g(12, edges);

  int scan_mismatch = 0;
  QueryOracle probe(g, QueryOracle::Variant::weight_sorted);
  for (Vertex v = 0; v < 12; ++v)
    for (std::size_t i = 1; i <= weight_class_of(2.0, eps) + 1; ++i)
      scan_mismatch += weight_class_bounds(probe, v, i, eps) != scan_class(g, v, i, eps);

  int good = 0, dense_runs = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    QueryOracle o(g, QueryOracle::Variant::weight_sorted);
    SparsifyPlan base;
    base.seed = seed;
    const auto r = weighted_sparsify(o, eps, base);
    double additive = 0;
    std::size_t dense = 0;
    for (const auto& c : r.classes)
      if (!c.read_fully) {
        additive += c.scale * c.delta;
        ++dense;
      }
    dense_runs += dense == 2;
    good += cut_band_violations(g, r.graph, 1 - 3 * eps, 1 + 3 * eps, 3 * additive) == 0;
  }
  return {scan_mismatch == 0 && good >= 95 && dense_runs == 100,
          fmt("%d class-bound mismatches vs linear scan; %d/100 seeds in the (1+-3eps) band (need >= 95); "
              "two dense classes in %d/100",
              scan_mismatch, good, dense_runs)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit_s;  // 0 = no runtime limit
  };
  const std::vector<Criterion> all{
      {1, "cost formulations agree", cost_forms_agree, 10},
      {2, "clique cost is (n^3-n)/3", clique_cost, 0},
      {3, "lower bound 4m^2/(3n) is sound", lower_bound_sound, 120},
      {4, "(eps,delta) sparsifier cut bounds", sparsifier_cut_bounds, 60},
      {5, "cost distortion band", distortion_band, 0},
      {6, "query sublinearity on K256", query_sublinearity, 0},
      {7, "sampling probabilities sum to 1", probabilities_normalized, 0},
      {8, "sketch pipeline and linearity", sketch_pipeline, 120},
      {9, "MPC two-round protocol", mpc_two_round, 0},
      {10, "MPC one-round dense branch", mpc_one_round, 0},
      {11, "end-to-end approximation", end_to_end, 120},
      {12, "hard instance generators", hard_instances, 0},
      {13, "weighted pipeline", weighted_pipeline, 0},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += fmt("; runtime over %.0f s", c.limit_s);
    }
    failed += !o.pass;
    std::printf("%s  %2d  %-36s %s  [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}
