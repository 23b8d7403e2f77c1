#include "subhc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <json.hpp>

namespace subhc {
namespace {

constexpr int kPowerIterations = 500;
constexpr double kPowerTolerance = 1e-8;

std::vector<double> weighted_degrees(const Graph& g) {
  std::vector<double> d(g.n(), 0.0);
  for (const auto& e : g.edges()) {
    d[e.u] += e.w;
    d[e.v] += e.w;
  }
  return d;
}

// Component grouping whose size is closest to n/2 (subset sum over component sizes).
Cut component_split(const std::vector<std::size_t>& label, std::size_t k) {
  const std::size_t n = label.size();
  std::vector<std::size_t> size(k, 0);
  for (auto l : label) ++size[l];
  // reach[c][s]: some subset of the first c components has total size s
  std::vector<std::vector<char>> reach(k + 1, std::vector<char>(n + 1, 0));
  reach[0][0] = 1;
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t s = 0; s <= n; ++s)
      if (reach[c][s]) {
        reach[c + 1][s] = 1;
        reach[c + 1][s + size[c]] = 1;
      }
  std::size_t target = 0;
  for (std::size_t s = 1; s < n; ++s) {
    const auto gap = [n](std::size_t x) { return x * 2 > n ? x * 2 - n : n - x * 2; };
    if (reach[k][s] && (target == 0 || gap(s) < gap(target))) target = s;
  }
  std::vector<char> take(k, 0);
  for (std::size_t c = k, s = target; c > 0; --c) {
    if (reach[c - 1][s]) continue;
    take[c - 1] = 1;
    s -= size[c - 1];
  }
  std::vector<Vertex> ids;
  for (Vertex v = 0; v < n; ++v)
    if (take[label[v]]) ids.push_back(v);
  return Cut(std::move(ids));
}

std::vector<double> power_fiedler(const Graph& g, const std::vector<double>& deg) {
  const std::size_t n = g.n();
  Eigen::VectorXd sq(n), inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    sq[i] = std::sqrt(deg[i]);
    inv[i] = 1.0 / sq[i];
  }
  const Eigen::VectorXd top = sq.normalized();
  // start from a fixed pseudo-random vector keyed by vertex id
  Eigen::VectorXd x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(mix64(i) >> 11) * 0x1.0p-53 - 0.5;
  x -= top.dot(x) * top;
  x.normalize();
  // (I + D^-1/2 A D^-1/2) shares eigenvectors with the normalized Laplacian and is PSD, so the
  // dominant direction orthogonal to D^1/2 1 is the Fiedler vector.
  Eigen::VectorXd y(n);
  for (int it = 0; it < kPowerIterations; ++it) {
    y = x;
    for (const auto& e : g.edges()) {
      const double a = e.w * inv[e.u] * inv[e.v];
      y[e.u] += a * x[e.v];
      y[e.v] += a * x[e.u];
    }
    y -= top.dot(y) * top;
    const double norm = y.norm();
    if (norm == 0.0) break;
    y /= norm;
    const double change = (y - x).norm();
    x.swap(y);
    if (change < kPowerTolerance) break;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * inv[i];
  return out;
}

}  // namespace

std::vector<double> fiedler_vector(const Graph& g, std::size_t dense_limit) {
  const std::size_t n = g.n();
  if (n < 2) throw DomainError("fiedler_vector needs n >= 2");
  const auto deg = weighted_degrees(g);
  for (double d : deg)
    if (!(d > 0.0)) throw DomainError("fiedler_vector needs a graph without isolated vertices");
  std::vector<double> out;
  if (n > dense_limit) {
    out = power_fiedler(g, deg);
  } else {
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& e : g.edges()) {
      const double a = e.w / std::sqrt(deg[e.u] * deg[e.v]);
      L(e.u, e.v) -= a;
      L(e.v, e.u) -= a;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    if (es.info() != Eigen::Success) throw ContractViolation("eigensolver did not converge");
    const Eigen::VectorXd x = es.eigenvectors().col(1);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[static_cast<Eigen::Index>(i)] / std::sqrt(deg[i]);
  }
  // fix the sign: the first clearly nonzero entry is positive
  for (double v : out)
    if (std::abs(v) > 1e-12) {
      if (v < 0)
        for (double& y : out) y = -y;
      break;
    }
  return out;
}

Cut spectral_bisect(const Graph& g) {
  const std::size_t n = g.n();
  if (n < 2) throw DomainError("spectral_bisect needs at least two vertices");
  if (n == 2) return Cut{0};
  std::size_t k = 0;
  const auto label = component_labels(g, &k);
  if (k > 1) return component_split(label, k);

  const auto y = fiedler_vector(g);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return y[a] < y[b] || (y[a] == y[b] && a < b); });

  const std::size_t lo = (n + 2) / 3, hi = 2 * n / 3;
  std::vector<char> in_a(n, 0);
  double cut = 0.0, best = 0.0;
  std::size_t best_k = 0;
  for (std::size_t i = 1; i <= hi; ++i) {
    const Vertex v = order[i - 1];
    for (const auto& nb : g.adjacency(v)) cut += in_a[nb.v] ? -nb.w : nb.w;
    in_a[v] = 1;
    if (i < lo) continue;
    const double ratio = cut / static_cast<double>(i * (n - i));
    if (best_k == 0 || ratio < best) {
      best = ratio;
      best_k = i;
    }
  }
  return Cut(std::vector<Vertex>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_k)));
}

Cut ExactCutOracle::split(const Graph& sub) {
  const auto r = exact_hc(sub);
  const auto& root = r.tree.node(r.tree.root());
  return Cut(r.tree.leaves_under(root.left));
}

HCTree recursive_hc(const Graph& g, CutOracle& oracle) {
  if (g.n() == 0) throw DomainError("recursive_hc needs n >= 1");
  HCTree t;
  // ids[i] is the original label of sub's vertex i
  auto build = [&](auto&& self, const Graph& sub, const std::vector<Vertex>& ids) -> std::int32_t {
    const std::size_t n = ids.size();
    if (n == 1) return t.add_leaf(ids[0]);
    if (n == 2) {
      const auto l = t.add_leaf(ids[0]);
      return t.add_internal(l, t.add_leaf(ids[1]));
    }
    const Cut a = oracle.split(sub);
    if (a.empty() || a.size() >= n || a.ids().back() >= n)
      throw ContractViolation("cut oracle '" + oracle.name() + "' returned an improper split of " + std::to_string(n) + " vertices");
    const auto in = a.membership(n);
    std::vector<Vertex> la, lb, ga, gb;
    for (Vertex v = 0; v < n; ++v) {
      (in[v] ? la : lb).push_back(v);
      (in[v] ? ga : gb).push_back(ids[v]);
    }
    const auto l = self(self, induced_subgraph(sub, std::span<const Vertex>(la)), ga);
    const auto r = self(self, induced_subgraph(sub, std::span<const Vertex>(lb)), gb);
    return t.add_internal(l, r);
  };
  std::vector<Vertex> all(g.n());
  std::iota(all.begin(), all.end(), Vertex{0});
  build(build, g, all);
  return t;
}

std::string HcReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["m"] = m;
  j["eps"] = eps;
  j["delta"] = delta;
  j["q"] = q;
  j["queries"] = queries;
  j["sparsifier_edges"] = sparsifier_edges;
  j["read_all"] = read_all;
  j["cost_sparsifier"] = cost_sparsifier;
  j["cost_original"] = cost_original ? nlohmann::ordered_json(*cost_original) : nlohmann::ordered_json(nullptr);
  j["ratio"] = ratio ? nlohmann::ordered_json(*ratio) : nlohmann::ordered_json(nullptr);
  return j.dump();
}

HcResult hc_via_sparsifier(QueryOracle& o, double eps, CutOracle& oracle, std::uint64_t seed, const SparsifyPlan& base,
                           bool evaluate) {
  if (!(eps > 0.0 && eps <= 0.5)) throw DomainError("eps must lie in (0, 1/2]");
  const std::size_t n = o.vertex_count();
  if (n == 0) throw DomainError("empty graph");
  const auto before = o.ledger().query_count();

  std::vector<std::size_t> deg(n);
  std::size_t twice_m = 0;
  for (Vertex v = 0; v < n; ++v) twice_m += deg[v] = o.degree(v);

  HcResult res;
  HcReport& rep = res.report;
  rep.n = n;
  rep.m = twice_m / 2;
  rep.eps = eps;
  const auto choice = pick_delta_for_hc(n, rep.m, eps);
  rep.delta = choice.delta;
  rep.read_all = choice.read_all || n < 3;
  if (rep.read_all) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v)
      for (std::size_t i = 1; i <= deg[v]; ++i) {
        const auto [u, w] = o.weighted_neighbor(v, i);
        if (v < u) edges.push_back({v, u, w});
      }
    res.sparsifier = Graph(n, std::move(edges));
  } else {
    SparsifyPlan plan = base;
    plan.eps = eps;
    plan.delta = choice.delta;
    plan.seed = seed;
    res.sparsifier = eps_delta_sparsify(o, plan, deg);
    rep.q = plan.samples(n);
  }
  rep.queries = o.ledger().query_count() - before;
  rep.sparsifier_edges = res.sparsifier.m();

  res.tree = recursive_hc(res.sparsifier, oracle);
  rep.cost_sparsifier = cost_edge_form(res.sparsifier, res.tree);
  if (evaluate) {
    rep.cost_original = cost_edge_form(evaluation_graph(o), res.tree);
    rep.ratio = *rep.cost_original > 0.0 ? rep.cost_sparsifier / *rep.cost_original : 1.0;
  }
  return res;
}

HcResult hc_via_sparsifier(const Graph& g, double eps, CutOracle& oracle, std::uint64_t seed, const SparsifyPlan& base) {
  QueryOracle o(g);
  return hc_via_sparsifier(o, eps, oracle, seed, base, true);
}

}  // namespace subhc
