// subhc: command-line front end. Every subcommand is deterministic given --seed.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "subhc/cluster.hpp"
#include "subhc/cost.hpp"
#include "subhc/instances.hpp"
#include "subhc/mpc.hpp"
#include "subhc/sparsify.hpp"
#include "subhc/streaming.hpp"

using namespace subhc;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string report;
  std::string csv;
  std::size_t threads = 1;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path, 0);
  out << text;
}

// Module reports are flat objects; the command name goes first.
void write_report(const Common& c, const char* command, const std::string& body) {
  if (c.report.empty()) return;
  json j;
  j["command"] = command;
  j["seed"] = c.seed;
  const json parsed = json::parse(body);
  for (const auto& [k, v] : parsed.items())
    if (k != "seed") j[k] = v;
  write_file(c.report, j.dump(2) + "\n");
}

Graph load_graph(const std::string& path, std::optional<std::size_t> n) {
  if (path == "-") return read_edge_list(std::cin, n);
  return read_edge_list_file(path, n);
}

std::unique_ptr<CutOracle> make_oracle(const std::string& name) {
  if (name == "spectral") return std::make_unique<SpectralCutOracle>();
  if (name == "exact") return std::make_unique<ExactCutOracle>();
  throw DomainError("unknown oracle '" + name + "'");
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(15) << x;
  return os.str();
}

// ---- cost ----------------------------------------------------------------------------------

struct CostArgs {
  std::string graph, tree, tree_file;
  std::optional<std::size_t> n;
  bool exact = false;
};

int run_cost(const CostArgs& a, const Common& c) {
  const Graph g = load_graph(a.graph, a.n);
  std::string text = a.tree;
  if (!a.tree_file.empty()) {
    std::ifstream in(a.tree_file);
    if (!in) throw ParseError("cannot open " + a.tree_file, 0);
    std::getline(in, text, '\0');
  }
  const HCTree t = HCTree::parse(text);
  json j;
  j["n"] = g.n();
  j["m"] = g.m();
  if (a.exact) {
    const Rational cost = cost_edge_form(g.cast<Rational>(), t);
    std::cout << cost.str() << '\n';
    j["cost"] = cost.str();
  } else {
    const double cost = cost_edge_form(g, t);
    std::cout << fmt(cost) << '\n';
    j["cost"] = cost;
  }
  write_report(c, "cost", j.dump());
  return 0;
}

// ---- gen -----------------------------------------------------------------------------------

struct GenArgs {
  std::string model = "gnp";
  std::size_t n = 16;
  double p = 0.5;
  std::size_t m = 0;
  double gamma = 0.5;
  double eps = 0.1;
  std::size_t clique_size = 0, cliques = 0, t = 0;  // explicit hidden-matching shape; 0 = derive from gamma
  std::string out = "-";
};

int run_gen(const GenArgs& a, const Common& c) {
  Graph g;
  json j;
  j["model"] = a.model;
  if (a.model == "gnp") {
    g = gen_gnp(a.n, a.p, c.seed);
  } else if (a.model == "gnm") {
    g = gen_gnm(a.n, a.m, c.seed);
  } else if (a.model == "complete") {
    g = complete_graph(a.n);
  } else if (a.model == "clique-union") {
    g = gen_clique_union(a.n, a.gamma, c.seed);
  } else if (a.model == "hidden-matching") {
    auto inst = a.clique_size ? gen_hidden_matching(a.n, a.clique_size, a.cliques, a.t, c.seed)
                              : gen_hidden_matching(a.n, a.gamma, c.seed);
    j["clique_size"] = inst.clique_size;
    j["t"] = inst.t;
    g = std::move(inst.graph);
  } else if (a.model == "bicliques") {
    auto inst = gen_mpc_bicliques(a.n, a.eps, c.seed);
    j["small_size"] = inst.small_size;
    j["tile_count"] = inst.tile_count;
    g = std::move(inst.graph);
  } else {
    throw DomainError("unknown model '" + a.model + "'");
  }
  if (a.out == "-") {
    write_edge_list(std::cout, g);
  } else {
    std::ofstream out(a.out);
    if (!out) throw ParseError("cannot write " + a.out, 0);
    write_edge_list(out, g);
  }
  j["n"] = g.n();
  j["m"] = g.m();
  write_report(c, "gen", j.dump());
  return 0;
}

// ---- sparsify ------------------------------------------------------------------------------

struct PlanArgs {
  double c1 = 1.0, c2 = 2.0;
  std::size_t degree = 16;

  SparsifyPlan plan(const Common& c) const {
    SparsifyPlan p;
    p.c1 = c1;
    p.c2 = c2;
    p.expander_degree = degree;
    p.seed = c.seed;
    p.threads = c.threads;
    return p;
  }
};

struct SparsifyArgs {
  std::string graph, out;
  std::optional<std::size_t> n;
  double eps = 0.5;
  std::optional<double> delta;
  PlanArgs plan;
};

int run_sparsify(const SparsifyArgs& a, const Common& c) {
  Graph g = load_graph(a.graph, a.n);
  const std::size_t n = g.n(), m = g.m();
  const bool unit = g.unit_weights();
  QueryOracle o(std::move(g), unit ? QueryOracle::Variant::unweighted : QueryOracle::Variant::weight_sorted);
  json j;
  j["n"] = n;
  j["m"] = m;
  j["eps"] = a.eps;
  Graph h;
  if (unit) {
    SparsifyPlan plan = a.plan.plan(c);
    plan.eps = a.eps;
    plan.delta = a.delta ? *a.delta : pick_delta_for_hc(n, m, std::min(a.eps, 0.5)).delta;
    if (plan.delta <= 0) plan.delta = 1.0;  // edgeless: any delta gives the empty sparsifier
    h = eps_delta_sparsify(o, plan);
    j["delta"] = plan.delta;
    j["q"] = plan.samples(n);
  } else {
    if (a.delta) std::cerr << "note: --delta is ignored for weighted graphs (chosen per weight class)\n";
    auto res = weighted_sparsify(o, a.eps, a.plan.plan(c));
    auto classes = json::array();
    for (const auto& cl : res.classes)
      classes.push_back({{"index", cl.index}, {"edges", cl.edges}, {"alpha", cl.alpha}, {"read_fully", cl.read_fully},
                         {"delta", cl.delta}, {"scale", cl.scale}});
    j["classes"] = classes;
    h = std::move(res.graph);
  }
  j["queries"] = o.ledger().query_count();
  j["sparsifier_edges"] = h.m();
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw ParseError("cannot write " + a.out, 0);
    write_edge_list(out, h);
  }
  std::cout << "queries " << o.ledger().query_count() << "  sparsifier edges " << h.m() << '\n';
  write_report(c, "sparsify", j.dump());
  return 0;
}

// ---- hc ------------------------------------------------------------------------------------

struct HcArgs {
  std::string graph, oracle = "spectral", tree_out;
  std::optional<std::size_t> n;
  double eps = 0.25;
  bool full = false;
  PlanArgs plan;
};

int run_hc(const HcArgs& a, const Common& c) {
  Graph g = load_graph(a.graph, a.n);
  auto oracle = make_oracle(a.oracle);
  HcResult res;
  if (g.n() == 0) {
    res.report.eps = a.eps;
    res.report.read_all = true;
  } else if (a.full) {
    res.tree = recursive_hc(g, *oracle);
    res.report.n = g.n();
    res.report.m = g.m();
    res.report.eps = a.eps;
    res.report.read_all = true;
    res.report.sparsifier_edges = g.m();
    res.report.cost_sparsifier = cost_edge_form(g, res.tree);
    res.report.cost_original = res.report.cost_sparsifier;
    res.report.ratio = 1.0;
  } else if (g.unit_weights()) {
    res = hc_via_sparsifier(g, a.eps, *oracle, c.seed, a.plan.plan(c));
  } else {
    // weighted input: per-class sparsifier, then the same recursion
    if (!(a.eps > 0 && a.eps <= 0.5)) throw DomainError("eps must lie in (0, 1/2]");
    const Graph& hidden = g;
    QueryOracle o(hidden, QueryOracle::Variant::weight_sorted);
    auto sp = weighted_sparsify(o, a.eps, a.plan.plan(c));
    res.sparsifier = std::move(sp.graph);
    res.tree = recursive_hc(res.sparsifier, *oracle);
    auto& r = res.report;
    r.n = g.n();
    r.m = g.m();
    r.eps = a.eps;
    r.queries = o.ledger().query_count();
    r.sparsifier_edges = res.sparsifier.m();
    r.read_all = std::all_of(sp.classes.begin(), sp.classes.end(), [](const auto& cl) { return cl.read_fully; });
    r.cost_sparsifier = cost_edge_form(res.sparsifier, res.tree);
    r.cost_original = cost_edge_form(g, res.tree);
    r.ratio = *r.cost_original > 0 ? r.cost_sparsifier / *r.cost_original : 1.0;
  }
  const double cost = res.tree.empty() ? 0.0 : cost_edge_form(g, res.tree);
  std::cout << "cost " << fmt(cost) << '\n';
  std::cout << "queries " << res.report.queries << "  sparsifier edges " << res.report.sparsifier_edges
            << (res.report.read_all ? "  (read all)" : "") << '\n';
  if (!a.tree_out.empty()) write_file(a.tree_out, res.tree.to_string() + "\n");
  json j = json::parse(res.report.to_json());
  j["cost"] = cost;
  j["oracle"] = a.oracle;
  j["tree"] = res.tree.to_string();
  write_report(c, "hc", j.dump());
  return 0;
}

// ---- stream --------------------------------------------------------------------------------

struct StreamArgs {
  std::size_t n = 0;
  double eps = 0.5, c_s = 1.0, max_weight = 1.0;
  std::string input, oracle = "spectral", tree_out;
};

int run_stream(const StreamArgs& a, const Common& c) {
  const auto cfg = SketchConfig::make(a.n, a.eps, c.seed, a.c_s, SketchConfig::classes_for(a.max_weight));
  auto oracle = make_oracle(a.oracle);
  FileEventSource src(a.input);
  const auto res = stream_hc(src, cfg, *oracle);
  std::cout << "events " << res.report.events << "  peak words " << res.report.peak_words << " (bound "
            << res.report.memory_bound << ")\n";
  std::cout << "sparsifier edges " << res.report.sparsifier_edges << "  cost " << fmt(res.report.cost_sparsifier)
            << '\n';
  if (!a.tree_out.empty()) write_file(a.tree_out, res.tree.to_string() + "\n");
  json j = json::parse(res.report.to_json());
  j["tree"] = res.tree.to_string();
  write_report(c, "stream", j.dump());
  return 0;
}

// ---- mpc -----------------------------------------------------------------------------------

struct MpcArgs {
  int rounds = 2;
  std::size_t k = 4;
  std::uint64_t budget = 0;
  double eps = 0.5, C = 4.0, c_s = 1.0;
  std::string input, partition = "uniform", branch = "auto", oracle = "spectral";
  std::optional<std::size_t> n;
};

int run_mpc(const MpcArgs& a, const Common& c) {
  const Graph g = load_graph(a.input, a.n);
  const std::size_t n = g.n();
  if (n == 0) throw DomainError("mpc needs a graph with at least one vertex");
  double wmax = 1.0;
  for (const auto& e : g.edges()) wmax = std::max(wmax, e.w);
  const auto cfg = SketchConfig::make(n, a.eps, c.seed, a.c_s, SketchConfig::classes_for(wmax));
  // default budget: every vertex's sketch once, which the 2-round protocol never exceeds
  const std::uint64_t budget = a.budget ? a.budget : n * VertexSketch(cfg, 0).words() + 2 * g.m();
  const auto mode = a.partition == "round-robin" ? PartitionMode::round_robin : PartitionMode::uniform;
  if (a.partition != "uniform" && a.partition != "round-robin")
    throw DomainError("unknown partition '" + a.partition + "'");
  const auto machines = mpc_partition(g, a.k, c.seed, budget, mode);
  auto oracle = make_oracle(a.oracle);

  MpcResult res;
  if (a.rounds == 2) {
    res = mpc_2round(n, machines, cfg, *oracle, c.threads);
  } else {
    OneRoundOptions opt;
    opt.C = a.C;
    opt.c_s = a.c_s;
    if (a.branch == "dense") opt.branch = OneRoundOptions::Branch::dense;
    else if (a.branch == "sparse") opt.branch = OneRoundOptions::Branch::sparse;
    else if (a.branch != "auto") throw DomainError("unknown branch '" + a.branch + "'");
    res = mpc_1round(n, g.m(), machines, a.eps, c.seed, *oracle, opt, c.threads);
  }
  for (const auto& w : res.report.warnings) std::cerr << "warning: " << w << '\n';
  const double cost = cost_edge_form(g, res.tree);
  std::cout << res.report.protocol << ": rounds " << res.report.rounds << "  words sent " << res.ledger.total_sent()
            << "  sparsifier edges " << res.report.sparsifier_edges << "  cost " << fmt(cost) << '\n';
  if (!c.csv.empty()) {
    std::ostringstream os;
    os << "machine,round,sent,received\n";
    for (std::size_t i = 0; i < res.report.k; ++i)
      for (std::size_t r = 0; r < res.report.rounds; ++r)
        os << i << ',' << r + 1 << ',' << res.report.sent[i][r] << ',' << res.report.received[i][r] << '\n';
    write_file(c.csv, os.str());
  }
  json j = json::parse(res.report.to_json());
  j["cost"] = cost;
  write_report(c, "mpc", j.dump());
  return 0;
}

// ---- bench ---------------------------------------------------------------------------------

struct BenchArgs {
  std::string suite = "approx";
  std::size_t seeds = 20;
  std::size_t n = 512;
  double eps = 0.25;
  PlanArgs plan;
};

int run_bench(const BenchArgs& a, const Common& c) {
  if (a.suite != "approx") throw DomainError("unknown suite '" + a.suite + "'");
  if (a.n < 3) throw DomainError("bench needs n >= 3");
  SpectralCutOracle oracle;
  const double N = static_cast<double>(a.n);
  const double max_m = N * (N - 1) / 2;
  auto rows = json::array();
  std::ostringstream csv;
  csv << "zeta,seed,n,m,read_all,queries,q,sparsifier_edges,cost_ratio\n";
  for (double zeta : {1.1, 4.0 / 3.0, 1.5, 1.8}) {
    const auto m = static_cast<std::size_t>(std::min(max_m, std::round(std::pow(N, zeta))));
    const Graph g = gen_gnm(a.n, m, derive_seed(c.seed, 0xbe4c, static_cast<std::uint64_t>(zeta * 1000)));
    const double full = cost_edge_form(g, recursive_hc(g, oracle));
    double sum = 0;
    for (std::size_t s = 0; s < a.seeds; ++s) {
      const std::uint64_t seed = derive_seed(c.seed, 0x5eed, s);
      QueryOracle o(g);
      const auto res = hc_via_sparsifier(o, a.eps, oracle, seed, a.plan.plan(c), false);
      const double ratio = full > 0 ? cost_edge_form(g, res.tree) / full : 1.0;
      sum += ratio;
      rows.push_back({{"zeta", zeta},
                      {"seed", s},
                      {"n", a.n},
                      {"m", g.m()},
                      {"read_all", res.report.read_all},
                      {"queries", res.report.queries},
                      {"q", res.report.q},
                      {"sparsifier_edges", res.report.sparsifier_edges},
                      {"cost_ratio", ratio}});
      csv << fmt(zeta) << ',' << s << ',' << a.n << ',' << g.m() << ',' << res.report.read_all << ','
          << res.report.queries << ',' << res.report.q << ',' << res.report.sparsifier_edges << ',' << fmt(ratio)
          << '\n';
    }
    std::cout << "zeta " << std::setprecision(4) << zeta << "  m " << g.m() << "  queries "
              << rows.back()["queries"].get<std::uint64_t>() << "  mean ratio " << std::setprecision(15)
              << sum / static_cast<double>(std::max<std::size_t>(a.seeds, 1)) << '\n';
  }
  if (!c.report.empty()) write_file(c.report, rows.dump(2) + "\n");
  if (!c.csv.empty()) write_file(c.csv, csv.str());
  return 0;
}

void add_plan_flags(CLI::App* sub, PlanArgs& p) {
  sub->add_option("--c1", p.c1, "Sparsifier constant C1")->capture_default_str();
  sub->add_option("--c2", p.c2, "Sparsifier constant C2")->capture_default_str();
  sub->add_option("--expander-degree", p.degree, "Expander degree (even)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sublinear hierarchical clustering: sparsifiers, streaming and MPC simulators"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Shared random seed")->envname("SUBHC_SEED")->capture_default_str();
  app.add_option("--report", common.report, "Write a JSON report to this file");
  app.add_option("--csv", common.csv, "Write a flat CSV table (bench rows, mpc per-machine words)");
  app.add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  CostArgs cost;
  auto* c_cost = app.add_subcommand("cost", "Dasgupta cost of a tree on a graph");
  c_cost->add_option("--graph", cost.graph, "Edge list file ('-' for stdin)")->required();
  c_cost->add_option("--tree", cost.tree, "Tree in nested-parenthesis form, e.g. \"((0,1),(2,3))\"");
  c_cost->add_option("--tree-file", cost.tree_file, "File holding the tree");
  c_cost->add_option("--n", cost.n, "Vertex count (default: from the file)");
  c_cost->add_flag("--exact", cost.exact, "Rational arithmetic");

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Generate a graph");
  c_gen->add_option("--model", gen.model, "gnp | gnm | complete | clique-union | hidden-matching | bicliques")
      ->capture_default_str();
  c_gen->add_option("--n", gen.n, "Vertices")->capture_default_str();
  c_gen->add_option("--p", gen.p, "Edge probability (gnp)");
  c_gen->add_option("--m", gen.m, "Edge count (gnm)");
  c_gen->add_option("--gamma", gen.gamma, "Clique exponent (clique-union, hidden-matching)");
  c_gen->add_option("--eps", gen.eps, "Biclique exponent slack (bicliques)");
  auto* o_s = c_gen->add_option("--clique-size", gen.clique_size, "Hidden-matching clique size (overrides --gamma)");
  c_gen->add_option("--cliques", gen.cliques, "Hidden-matching clique count (even)")->needs(o_s);
  c_gen->add_option("--t", gen.t, "Hidden-matching edges per matched clique pair")->needs(o_s);
  c_gen->add_option("--out", gen.out, "Output file ('-' for stdout)")->capture_default_str();

  SparsifyArgs sp;
  auto* c_sp = app.add_subcommand("sparsify", "(eps, delta)-cut sparsifier in the query model");
  c_sp->add_option("--graph", sp.graph, "Edge list file")->required();
  c_sp->add_option("--n", sp.n, "Vertex count");
  c_sp->add_option("--eps", sp.eps, "Multiplicative error")->capture_default_str();
  c_sp->add_option("--delta", sp.delta, "Additive error (default: from the cost lower bound)");
  c_sp->add_option("--out", sp.out, "Write the sparsifier edge list");
  add_plan_flags(c_sp, sp.plan);

  HcArgs hc;
  auto* c_hc = app.add_subcommand("hc", "Hierarchical clustering through the sparsifier");
  c_hc->add_option("--graph", hc.graph, "Edge list file")->required();
  c_hc->add_option("--n", hc.n, "Vertex count");
  c_hc->add_option("--eps", hc.eps, "Error parameter in (0, 1/2]")->capture_default_str();
  c_hc->add_option("--oracle", hc.oracle, "spectral | exact (n <= 14)")->capture_default_str();
  c_hc->add_flag("--full", hc.full, "Cluster the whole graph without sparsifying");
  c_hc->add_option("--tree-out", hc.tree_out, "Write the tree");
  add_plan_flags(c_hc, hc.plan);

  StreamArgs st;
  auto* c_st = app.add_subcommand("stream", "Single-pass dynamic stream clustering");
  c_st->add_option("--n", st.n, "Vertices")->required();
  c_st->add_option("--eps", st.eps, "Sparsifier error")->capture_default_str();
  c_st->add_option("--input", st.input, "Stream file ('+ u v [w]' / '- u v [w]')")->required();
  c_st->add_option("--c-s", st.c_s, "Sketch copy constant")->capture_default_str();
  c_st->add_option("--max-weight", st.max_weight, "Largest edge weight in the stream")->capture_default_str();
  c_st->add_option("--oracle", st.oracle, "spectral | exact")->capture_default_str();
  c_st->add_option("--tree-out", st.tree_out, "Write the tree");

  MpcArgs mp;
  auto* c_mp = app.add_subcommand("mpc", "MPC protocols");
  c_mp->add_option("--rounds", mp.rounds, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
  c_mp->add_option("--k", mp.k, "Machines")->check(CLI::PositiveNumber)->capture_default_str();
  c_mp->add_option("--budget", mp.budget, "Words per machine per round (default: generous)");
  c_mp->add_option("--eps", mp.eps, "Error parameter")->capture_default_str();
  c_mp->add_option("--input", mp.input, "Edge list file")->required();
  c_mp->add_option("--n", mp.n, "Vertex count");
  c_mp->add_option("--partition", mp.partition, "uniform | round-robin")->capture_default_str();
  c_mp->add_option("--branch", mp.branch, "auto | dense | sparse (1 round)")->capture_default_str();
  c_mp->add_option("--C", mp.C, "Dense-branch sampling constant")->capture_default_str();
  c_mp->add_option("--c-s", mp.c_s, "Sketch copy constant")->capture_default_str();
  c_mp->add_option("--oracle", mp.oracle, "spectral | exact")->capture_default_str();

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Density sweep of the query-model pipeline");
  c_bench->add_option("--suite", bench.suite, "approx")->capture_default_str();
  c_bench->add_option("--seeds", bench.seeds, "Sparsifier seeds per density")->capture_default_str();
  c_bench->add_option("--n", bench.n, "Vertices")->capture_default_str();
  c_bench->add_option("--eps", bench.eps, "Error parameter")->capture_default_str();
  add_plan_flags(c_bench, bench.plan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_cost->parsed()) {
      if (cost.tree.empty() == cost.tree_file.empty()) throw CLI::ValidationError("cost", "give exactly one of --tree, --tree-file");
      return run_cost(cost, common);
    }
    if (c_gen->parsed()) return run_gen(gen, common);
    if (c_sp->parsed()) return run_sparsify(sp, common);
    if (c_hc->parsed()) return run_hc(hc, common);
    if (c_st->parsed()) return run_stream(st, common);
    if (c_mp->parsed()) return run_mpc(mp, common);
    if (c_bench->parsed()) return run_bench(bench, common);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ProtocolViolation& e) {
    std::cerr << "protocol violation: " << e.what() << '\n';
    return 2;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 2;
  } catch (const RecoveryError& e) {
    std::cerr << "sketch recovery failed: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
