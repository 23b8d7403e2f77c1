#include "subhc/mpc.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "subhc/cost.hpp"
#include "subhc/expander.hpp"

namespace subhc {

std::vector<Machine> mpc_partition(const Graph& g, std::size_t k, std::uint64_t seed, std::uint64_t budget,
                                   PartitionMode mode) {
  if (k == 0) throw DomainError("mpc_partition needs k >= 1");
  std::vector<Machine> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i].id = i;
    out[i].budget = budget;
    out[i].seed = derive_seed(seed, 0x3ac, i);
  }
  Rng rng(derive_seed(seed, 0x9a7));
  for (std::size_t i = 0; i < g.m(); ++i) {
    const std::size_t to = mode == PartitionMode::uniform ? uniform_below(rng, k) : i % k;
    out[to].edges.push_back(g.edges()[i]);
  }
  return out;
}

MpcNetwork::MpcNetwork(std::vector<std::uint64_t> budgets, ResourceLedger& ledger)
    : budgets_(std::move(budgets)), ledger_(ledger), sent_now_(budgets_.size()), received_now_(budgets_.size()) {
  ledger_.set_machines(budgets_.size());
}

std::size_t MpcNetwork::open_round() {
  if (open_) throw ProtocolViolation("round " + std::to_string(rounds_) + " is already open");
  open_ = true;
  ledger_.open_round(rounds_);
  std::fill(sent_now_.begin(), sent_now_.end(), 0);
  std::fill(received_now_.begin(), received_now_.end(), 0);
  return rounds_;
}

void MpcNetwork::send(std::size_t from, std::size_t to, std::vector<std::uint64_t> payload) {
  if (!open_) throw ProtocolViolation("send outside an open round");
  if (from >= budgets_.size() || to >= budgets_.size()) throw DomainError("send: machine id out of range");
  const std::uint64_t words = payload.size();
  sent_now_[from] += words;
  received_now_[to] += words;
  const std::string round = " in round " + std::to_string(rounds_ + 1);
  if (sent_now_[from] > budgets_[from])
    throw ProtocolViolation("machine " + std::to_string(from) + " exceeded its send budget of " +
                            std::to_string(budgets_[from]) + " words" + round);
  if (received_now_[to] > budgets_[to])
    throw ProtocolViolation("machine " + std::to_string(to) + " exceeded its receive budget of " +
                            std::to_string(budgets_[to]) + " words" + round);
  ledger_.record_message(from, to, rounds_, words);
  pending_.push_back({from, to, rounds_, std::move(payload)});
}

void MpcNetwork::close_round() {
  if (!open_) throw ProtocolViolation("no round to close");
  std::stable_sort(pending_.begin(), pending_.end(),
                   [](const Message& a, const Message& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  for (auto& m : pending_) {
    transcript_ = derive_seed(transcript_, m.round, m.from, m.to, m.payload.size());
    for (std::uint64_t w : m.payload) transcript_ = mix64(transcript_ ^ w);
    delivered_.push_back(std::move(m));
  }
  pending_.clear();
  open_ = false;
  ++rounds_;
}

std::vector<const Message*> MpcNetwork::inbox(std::size_t machine, std::size_t round) const {
  if (round >= rounds_) throw ProtocolViolation("reading round " + std::to_string(round + 1) + " messages before its barrier");
  std::vector<const Message*> out;
  for (const auto& m : delivered_)
    if (m.to == machine && m.round == round) out.push_back(&m);
  return out;
}

namespace {

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& f) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += threads) f(i);
    });
  for (auto& t : pool) t.join();
}

void check_machines(std::size_t n, const std::vector<Machine>& machines) {
  if (machines.empty()) throw DomainError("MPC needs at least one machine");
  for (std::size_t i = 0; i < machines.size(); ++i) {
    if (machines[i].id != i) throw DomainError("machine ids must be 0..k-1 in order");
    for (const auto& e : machines[i].edges)
      if (e.u >= n || e.v >= n || e.u == e.v) throw DomainError("machine edge out of range");
  }
}

// Sketches of every vertex touched by the machine's local edges.
std::map<Vertex, VertexSketch> local_sketches(const Machine& m, const SketchConfig& cfg) {
  std::map<Vertex, VertexSketch> out;
  for (const auto& e : m.edges) {
    out.try_emplace(e.u, cfg, e.u).first->second.add_edge(e.v, e.w, 1);
    out.try_emplace(e.v, cfg, e.v).first->second.add_edge(e.u, e.w, 1);
  }
  return out;
}

std::vector<std::map<Vertex, VertexSketch>> all_local_sketches(const std::vector<Machine>& machines,
                                                               const SketchConfig& cfg, std::size_t threads) {
  std::vector<std::map<Vertex, VertexSketch>> out(machines.size());
  parallel_for(machines.size(), threads, [&](std::size_t i) { out[i] = local_sketches(machines[i], cfg); });
  return out;
}

void absorb(std::map<Vertex, VertexSketch>& into, const Message& msg, const SketchConfig& cfg) {
  auto s = VertexSketch::deserialize(msg.payload, cfg);
  auto [it, fresh] = into.try_emplace(s.vertex(), s);
  if (!fresh) it->second += s;
}

MpcReport base_report(const char* protocol, std::size_t n, const std::vector<Machine>& machines, double eps,
                      std::uint64_t seed) {
  MpcReport r;
  r.protocol = protocol;
  r.n = n;
  r.k = machines.size();
  r.eps = eps;
  r.seed = seed;
  r.budget = machines[0].budget;
  for (const auto& mc : machines) {
    r.m += mc.edges.size();
    r.budget = std::min(r.budget, mc.budget);
  }
  return r;
}

std::vector<std::uint64_t> budgets_of(const std::vector<Machine>& machines) {
  std::vector<std::uint64_t> b;
  for (const auto& mc : machines) b.push_back(mc.budget);
  return b;
}

void finish(MpcResult& res, const MpcNetwork& net, CutOracle& oracle) {
  res.tree = recursive_hc(res.sparsifier, oracle);
  auto& r = res.report;
  r.rounds = net.rounds();
  r.transcript = net.transcript();
  r.sparsifier_edges = res.sparsifier.m();
  r.cost_sparsifier = cost_edge_form(res.sparsifier, res.tree);
  r.sent.assign(r.k, std::vector<std::uint64_t>(r.rounds, 0));
  r.received = r.sent;
  for (std::size_t i = 0; i < r.k; ++i)
    for (std::size_t j = 0; j < r.rounds; ++j) {
      r.sent[i][j] = res.ledger.sent(i, j);
      r.received[i][j] = res.ledger.received(i, j);
    }
}

Graph recover_at_coordinator(std::map<Vertex, VertexSketch>& summed, const SketchConfig& cfg) {
  auto sketches = empty_sketches(cfg);
  for (auto& [v, s] : summed) sketches[v] = std::move(s);
  return recover_sparsifier(sketches, cfg);
}

}  // namespace

MpcResult mpc_2round(std::size_t n, const std::vector<Machine>& machines, const SketchConfig& cfg, CutOracle& oracle,
                     std::size_t threads) {
  check_machines(n, machines);
  if (cfg.n != n) throw DomainError("sketch config and MPC instance disagree on n");
  const std::size_t k = machines.size();
  const std::size_t block = (n + k - 1) / k;
  auto owner = [block](Vertex v) { return static_cast<std::size_t>(v) / block; };

  MpcResult res;
  res.report = base_report("2round", n, machines, cfg.eps, cfg.seed);
  MpcNetwork net(budgets_of(machines), res.ledger);

  auto local = all_local_sketches(machines, cfg, threads);

  // round 1: partial sketches to the owning machine
  std::vector<std::map<Vertex, VertexSketch>> owned(k);
  const std::size_t r1 = net.open_round();
  for (std::size_t i = 0; i < k; ++i)
    for (auto& [v, s] : local[i]) {
      if (owner(v) == i)
        owned[i].emplace(v, std::move(s));
      else
        net.send(i, owner(v), s.serialize());
    }
  net.close_round();
  local.clear();

  // round 2: complete sketches to the coordinator
  const std::size_t r2 = net.open_round();
  for (std::size_t i = 0; i < k; ++i) {
    for (const Message* msg : net.inbox(i, r1)) absorb(owned[i], *msg, cfg);
    if (i == 0) continue;
    for (const auto& [v, s] : owned[i])
      if (!s.empty()) net.send(i, 0, s.serialize());
  }
  net.close_round();

  auto& coord = owned[0];
  for (const Message* msg : net.inbox(0, r2)) absorb(coord, *msg, cfg);
  res.sparsifier = recover_at_coordinator(coord, cfg);
  finish(res, net, oracle);
  return res;
}

double one_round_probability(std::size_t n, std::size_t m, double eps, double C) {
  if (m == 0 || n < 2) return 1.0;
  const double beta = static_cast<double>(m) / std::pow(static_cast<double>(n), 4.0 / 3.0);
  return std::min(1.0, C * std::log(static_cast<double>(n)) / (eps * eps * beta));
}

double one_round_delta(std::size_t n, std::size_t m) {
  const double N = static_cast<double>(n), M = static_cast<double>(m);
  return M * M / (N * N * N);
}

MpcResult mpc_1round(std::size_t n, std::size_t m, const std::vector<Machine>& machines, double eps,
                     std::uint64_t seed, CutOracle& oracle, const OneRoundOptions& opt, std::size_t threads) {
  check_machines(n, machines);
  if (!(eps > 0 && eps <= 0.5)) throw DomainError("mpc_1round needs eps in (0, 1/2]");
  if (!(opt.C > 0)) throw DomainError("mpc_1round needs C > 0");
  const std::size_t k = machines.size();
  const double N = static_cast<double>(n);
  const bool dense = opt.branch == OneRoundOptions::Branch::automatic
                         ? static_cast<double>(m) >= std::pow(N, 5.0 / 3.0)
                         : opt.branch == OneRoundOptions::Branch::dense;

  MpcResult res;
  res.report = base_report(dense ? "1round-dense" : "1round-sparse", n, machines, eps, seed);
  if (dense && static_cast<double>(k) > static_cast<double>(m) / std::pow(N, 4.0 / 3.0))
    res.report.warnings.push_back("k exceeds m/n^(4/3); the dense-branch budget argument does not apply");
  if (!dense && static_cast<double>(k) > std::cbrt(N))
    res.report.warnings.push_back("k exceeds n^(1/3); the sparse-branch budget argument does not apply");
  MpcNetwork net(budgets_of(machines), res.ledger);

  if (dense) {
    for (const auto& mc : machines)
      for (const auto& e : mc.edges)
        if (e.w != 1.0) throw DomainError("the dense one-round branch is for unweighted graphs");
    const double p = one_round_probability(n, m, eps, opt.C);
    const double delta = one_round_delta(n, m);
    res.report.p = p;
    res.report.delta = delta;

    std::vector<std::vector<std::uint64_t>> samples(k);
    parallel_for(k, threads, [&](std::size_t i) {
      Rng rng(machines[i].seed);
      for (const auto& e : machines[i].edges)
        if (p >= 1.0 || uniform01(rng) < p) {
          samples[i].push_back(e.u);
          samples[i].push_back(e.v);
        }
    });
    const std::size_t r = net.open_round();
    for (std::size_t i = 1; i < k; ++i)
      if (!samples[i].empty()) net.send(i, 0, std::move(samples[i]));
    net.close_round();

    std::vector<Edge> h;
    auto take = [&](const std::vector<std::uint64_t>& words) {
      for (std::size_t j = 0; j + 1 < words.size(); j += 2)
        h.push_back({static_cast<Vertex>(words[j]), static_cast<Vertex>(words[j + 1]), 1.0 / p});
    };
    take(samples[0]);
    for (const Message* msg : net.inbox(0, r)) take(msg->payload);
    res.sampled = Graph::merged(n, h);
    if (n >= 3 && delta > 0) {
      const double w = 2.0 * eps * delta / static_cast<double>(opt.expander_degree);
      const auto x = build_expander(n, opt.expander_degree, derive_seed(seed, 0xe49), w);
      auto all = res.sampled.edges();
      const auto extra = x.edges();
      all.insert(all.end(), extra.begin(), extra.end());
      res.sparsifier = Graph::merged(n, all);
    } else {
      res.sparsifier = res.sampled;
    }
  } else {
    double wmax = 1.0;
    for (const auto& mc : machines)
      for (const auto& e : mc.edges) wmax = std::max(wmax, e.w);
    const auto cfg = SketchConfig::make(n, eps, seed, opt.c_s, SketchConfig::classes_for(wmax));
    auto local = all_local_sketches(machines, cfg, threads);
    const std::size_t r = net.open_round();
    for (std::size_t i = 1; i < k; ++i)
      for (const auto& [v, s] : local[i]) net.send(i, 0, s.serialize());
    net.close_round();
    auto& coord = local[0];
    for (const Message* msg : net.inbox(0, r)) absorb(coord, *msg, cfg);
    res.sparsifier = recover_at_coordinator(coord, cfg);
  }
  finish(res, net, oracle);
  return res;
}

std::string MpcReport::to_json() const {
  nlohmann::ordered_json j;
  j["protocol"] = protocol;
  j["n"] = n;
  j["m"] = m;
  j["k"] = k;
  j["eps"] = eps;
  j["seed"] = seed;
  j["budget"] = budget;
  j["rounds"] = rounds;
  j["transcript"] = transcript;
  j["sparsifier_edges"] = sparsifier_edges;
  j["cost_sparsifier"] = cost_sparsifier;
  j["p"] = p ? nlohmann::ordered_json(*p) : nlohmann::ordered_json(nullptr);
  j["delta"] = delta ? nlohmann::ordered_json(*delta) : nlohmann::ordered_json(nullptr);
  auto ms = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < sent.size(); ++i) {
    nlohmann::ordered_json mj;
    mj["id"] = i;
    mj["sent"] = sent[i];
    mj["received"] = received[i];
    ms.push_back(mj);
  }
  j["machines"] = ms;
  j["warnings"] = warnings;
  return j.dump();
}

}  // namespace subhc
