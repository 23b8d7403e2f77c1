#include <gtest/gtest.h>

#include <map>

#include "subhc/cost.hpp"
#include "subhc/mpc.hpp"
#include "subhc/streaming.hpp"
#include "support.hpp"

using namespace subhc;
using subhc::testing::bernoulli_graph;
using subhc::testing::cut_band_violations;
using subhc::testing::for_each_cut;
using subhc::testing::mask_cut;

namespace {

constexpr std::uint64_t kRoomy = std::uint64_t{1} << 40;

void expect_same_graph(const Graph& a, const Graph& b) {
  ASSERT_EQ(a.n(), b.n());
  ASSERT_EQ(a.m(), b.m());
  for (std::size_t i = 0; i < a.m(); ++i) {
    EXPECT_EQ(a.edges()[i].u, b.edges()[i].u);
    EXPECT_EQ(a.edges()[i].v, b.edges()[i].v);
    EXPECT_EQ(a.edges()[i].w, b.edges()[i].w);
  }
}

std::map<std::pair<Vertex, Vertex>, std::pair<double, int>> edge_multiset(const std::vector<Edge>& edges) {
  std::map<std::pair<Vertex, Vertex>, std::pair<double, int>> out;
  for (const auto& e : edges) {
    auto& slot = out[{std::min(e.u, e.v), std::max(e.u, e.v)}];
    slot.first += e.w;
    ++slot.second;
  }
  return out;
}

// K_12 minus a perfect matching: 60 edges.
Graph near_clique() {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < 12; ++u)
    for (Vertex v = u + 1; v < 12; ++v)
      if (!(u % 2 == 0 && v == u + 1)) edges.push_back({u, v, 1.0});
  return Graph(12, edges);
}

OneRoundOptions forced(OneRoundOptions::Branch b, double C = 4.0) {
  OneRoundOptions o;
  o.branch = b;
  o.C = C;
  return o;
}

}  // namespace

TEST(MpcPartition, Examples) {
  const auto g = bernoulli_graph(20, 0.4, 1);
  const auto one = mpc_partition(g, 1, 5, kRoomy);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].edges.size(), g.m());

  for (auto mode : {PartitionMode::uniform, PartitionMode::round_robin}) {
    const auto ms = mpc_partition(g, 3, 5, kRoomy, mode);
    std::vector<Edge> all;
    for (const auto& m : ms) all.insert(all.end(), m.edges.begin(), m.edges.end());
    EXPECT_EQ(edge_multiset(all), edge_multiset(g.edges()));
    EXPECT_NE(ms[0].seed, ms[1].seed);
  }
  EXPECT_THROW(mpc_partition(g, 0, 1, kRoomy), DomainError);
}

TEST(MpcPartition, UniformSplitConcentrates) {
  const auto g = gen_gnm(100, 1200, 3);
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    for (const auto& m : mpc_partition(g, 4, seed, kRoomy)) {
      EXPECT_GE(m.edges.size(), 200u);
      EXPECT_LE(m.edges.size(), 400u);
    }
}

TEST(MpcNetworkTest, BarrierAndBudgets) {
  ResourceLedger led;
  MpcNetwork net({10, 10, 3}, led);
  EXPECT_THROW(net.send(0, 1, {1}), ProtocolViolation);
  const auto r = net.open_round();
  net.send(1, 0, {7, 8});
  net.send(0, 1, {1});
  EXPECT_THROW(net.inbox(0, r), ProtocolViolation);
  try {
    net.send(0, 2, {1, 2, 3, 4});
    FAIL() << "expected a budget violation";
  } catch (const ProtocolViolation& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("machine 2"), std::string::npos) << what;
    EXPECT_NE(what.find("round 1"), std::string::npos) << what;
  }
  net.close_round();
  ASSERT_EQ(net.inbox(0, r).size(), 1u);
  EXPECT_EQ(net.inbox(0, r)[0]->payload, (std::vector<std::uint64_t>{7, 8}));
  EXPECT_EQ(net.rounds(), 1u);
  EXPECT_THROW(net.inbox(0, 1), ProtocolViolation);
}

TEST(MpcNetworkTest, TranscriptIgnoresSendOrder) {
  auto run = [](bool reversed) {
    ResourceLedger led;
    MpcNetwork net({100, 100, 100}, led);
    net.open_round();
    std::vector<std::tuple<std::size_t, std::size_t, std::uint64_t>> msgs{{1, 0, 4}, {2, 0, 5}, {2, 1, 6}, {0, 2, 7}};
    if (reversed) std::reverse(msgs.begin(), msgs.end());
    for (auto [f, t, w] : msgs) net.send(f, t, {w});
    net.close_round();
    return net.transcript();
  };
  EXPECT_EQ(run(false), run(true));
}

TEST(Mpc2Round, MatchesCentralizedSketch) {
  SpectralCutOracle oracle;
  const auto g = bernoulli_graph(12, 0.5, 9);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto cfg = SketchConfig::make(12, 0.5, seed);
    const auto machines = mpc_partition(g, 4, seed, 12 * VertexSketch(cfg, 0).words());
    const auto res = mpc_2round(12, machines, cfg, oracle);
    expect_same_graph(res.sparsifier, recover_sparsifier(sketch_graph(g, cfg), cfg));
    EXPECT_EQ(res.report.rounds, 2u);
    EXPECT_EQ(res.ledger.rounds(), 2u);
    for (std::size_t r = 0; r < 2; ++r) {
      std::uint64_t sent = 0, received = 0;
      for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_LE(res.ledger.sent(i, r), machines[i].budget);
        EXPECT_LE(res.ledger.received(i, r), machines[i].budget);
        sent += res.ledger.sent(i, r);
        received += res.ledger.received(i, r);
      }
      EXPECT_EQ(sent, received);
      EXPECT_GT(sent, 0u);
    }
  }
}

TEST(Mpc2Round, SingleMachineEqualsStreaming) {
  SpectralCutOracle oracle;
  const auto g = bernoulli_graph(11, 0.5, 2);
  const auto cfg = SketchConfig::make(11, 0.5, 4);
  const auto res = mpc_2round(11, mpc_partition(g, 1, 4, kRoomy), cfg, oracle);
  const auto st = stream_hc(insertion_stream(g), cfg, oracle);
  expect_same_graph(res.sparsifier, st.sparsifier);
  EXPECT_EQ(cost_edge_form(g, res.tree), cost_edge_form(g, st.tree));
  EXPECT_EQ(res.ledger.total_sent(), 0u);
}

TEST(Mpc2Round, UnderBudgetFailsInRoundOne) {
  SpectralCutOracle oracle;
  const auto g = bernoulli_graph(12, 0.5, 9);
  const auto cfg = SketchConfig::make(12, 0.5, 1);
  const auto machines = mpc_partition(g, 4, 1, VertexSketch(cfg, 0).words() - 1);
  try {
    mpc_2round(12, machines, cfg, oracle);
    FAIL() << "expected a protocol violation";
  } catch (const ProtocolViolation& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("round 1"), std::string::npos) << what;
    EXPECT_NE(what.find("machine "), std::string::npos) << what;
  }
}

TEST(Mpc2Round, TranscriptIndependentOfThreads) {
  SpectralCutOracle oracle;
  const auto g = bernoulli_graph(16, 0.4, 3);
  const auto cfg = SketchConfig::make(16, 0.5, 8);
  const auto machines = mpc_partition(g, 5, 8, kRoomy);
  const auto a = mpc_2round(16, machines, cfg, oracle, 1);
  const auto b = mpc_2round(16, machines, cfg, oracle, 4);
  EXPECT_EQ(a.report.transcript, b.report.transcript);
  expect_same_graph(a.sparsifier, b.sparsifier);
}

TEST(Mpc2Round, ReportJson) {
  SpectralCutOracle oracle;
  const auto g = bernoulli_graph(8, 0.5, 3);
  const auto res = mpc_2round(8, mpc_partition(g, 2, 1, kRoomy), SketchConfig::make(8, 0.5, 1), oracle);
  const auto j = res.report.to_json();
  for (const char* key : {"\"protocol\"", "\"rounds\"", "\"machines\"", "\"sent\"", "\"received\"", "\"transcript\""})
    EXPECT_NE(j.find(key), std::string::npos) << key;
}

TEST(Mpc1Round, DenseBranchBand) {
  SpectralCutOracle oracle;
  const auto g = near_clique();
  ASSERT_EQ(g.m(), 60u);
  const double eps = 0.5, delta = one_round_delta(12, 60);
  std::size_t good_h = 0, good_composite = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto res = mpc_1round(12, 60, mpc_partition(g, 3, seed, kRoomy), eps, seed, oracle,
                                forced(OneRoundOptions::Branch::dense));
    EXPECT_EQ(res.report.rounds, 1u);
    good_h += cut_band_violations(g, res.sampled, 1 - eps, 1 + eps, eps * delta) == 0;
    // the lower side of the band also allows -eps delta min(|S|, |S^c|)
    std::size_t bad = 0;
    for_each_cut(12, [&](std::uint64_t mask, std::size_t k) {
      const double w = mask_cut(g, mask), wh = mask_cut(res.sparsifier, mask);
      const double slack = eps * delta * static_cast<double>(std::min<std::size_t>(k, 12 - k));
      bad += wh < (1 - eps) * w - slack - 1e-9 || wh > (1 + eps) * w + slack + 1e-9;
    });
    good_composite += bad == 0;
  }
  EXPECT_GE(good_h, 95u);
  EXPECT_GE(good_composite, 95u);
}

TEST(Mpc1Round, ClampedProbabilityForwardsEverything) {
  SpectralCutOracle oracle;
  const auto g = near_clique();
  EXPECT_GE(one_round_probability(12, 60, 0.5, 4.0), 1.0);
  const auto res = mpc_1round(12, 60, mpc_partition(g, 3, 1, kRoomy), 0.5, 1, oracle,
                              forced(OneRoundOptions::Branch::dense));
  EXPECT_EQ(*res.report.p, 1.0);
  expect_same_graph(res.sampled, g);
  EXPECT_FALSE(res.report.warnings.empty());  // k = 3 > m / n^(4/3) at this size
}

TEST(Mpc1Round, DenseSamplingIsUnbiased) {
  SpectralCutOracle oracle;
  const auto g = complete_graph(8);
  const OneRoundOptions opt = forced(OneRoundOptions::Branch::dense, 0.1);
  const double p = one_round_probability(8, g.m(), 0.5, opt.C);
  ASSERT_LT(p, 0.9);
  ASSERT_GT(p, 0.1);
  const std::uint64_t mask = 0b00001110;  // S = {1, 2, 3}
  const double w = mask_cut(g, mask);
  double sum = 0, sq = 0;
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) {
    const auto res = mpc_1round(8, g.m(), mpc_partition(g, 2, s, kRoomy), 0.5, s, oracle, opt);
    const double x = mask_cut(res.sampled, mask);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / trials, var = sq / trials - mean * mean;
  EXPECT_NEAR(mean, w, 3 * std::sqrt(var / trials));
}

TEST(Mpc1Round, SparseBranchMatchesTwoRound) {
  SpectralCutOracle oracle;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = bernoulli_graph(10, 0.3, 40 + seed);
    const auto machines = mpc_partition(g, 2, seed, kRoomy);
    const auto one = mpc_1round(10, g.m(), machines, 0.5, seed, oracle);
    EXPECT_EQ(one.report.protocol, "1round-sparse");
    EXPECT_EQ(one.report.rounds, 1u);
    const auto two = mpc_2round(10, machines, SketchConfig::make(10, 0.5, seed), oracle);
    expect_same_graph(one.sparsifier, two.sparsifier);
    auto a = subhc::testing::internal_masks(one.tree), b = subhc::testing::internal_masks(two.tree);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(Mpc1Round, Errors) {
  SpectralCutOracle oracle;
  const auto g = near_clique();
  const auto machines = mpc_partition(g, 2, 1, kRoomy);
  EXPECT_THROW(mpc_1round(12, 60, machines, 0.75, 1, oracle), DomainError);
  EXPECT_THROW(mpc_1round(12, 60, mpc_partition(g, 2, 1, 10), 0.5, 1, oracle, forced(OneRoundOptions::Branch::dense)),
               ProtocolViolation);
}
