#ifndef SUBHC_MPC_HPP
#define SUBHC_MPC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subhc/cluster.hpp"
#include "subhc/ledger.hpp"
#include "subhc/sketch.hpp"

namespace subhc {

/// One MPC machine: its share of the edges and a per-round word budget for both sending and
/// receiving. Machine 0 is the coordinator.
struct Machine {
  std::size_t id = 0;
  std::vector<Edge> edges;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;  // private stream, derived from (shared seed, id)
};

enum class PartitionMode { uniform, round_robin };

/// Assigns every edge to exactly one of k machines.
std::vector<Machine> mpc_partition(const Graph& g, std::size_t k, std::uint64_t seed, std::uint64_t budget,
                                   PartitionMode mode = PartitionMode::uniform);

struct Message {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t round = 0;
  std::vector<std::uint64_t> payload;
};

/// Synchronous message passing. Messages sent in round r are delivered at the barrier that closes
/// r, sorted by (source, destination), and can only be read once that barrier has passed.
class MpcNetwork {
 public:
  MpcNetwork(std::vector<std::uint64_t> budgets, ResourceLedger& ledger);

  std::size_t open_round();
  /// Queues a message; throws ProtocolViolation as soon as either side's round budget is exceeded.
  void send(std::size_t from, std::size_t to, std::vector<std::uint64_t> payload);
  void close_round();

  /// Messages addressed to `machine` that were created in `round`.
  std::vector<const Message*> inbox(std::size_t machine, std::size_t round) const;

  std::size_t rounds() const noexcept { return rounds_; }
  bool round_open() const noexcept { return open_; }
  /// Running hash of every delivered message, in delivery order.
  std::uint64_t transcript() const noexcept { return transcript_; }

 private:
  std::vector<std::uint64_t> budgets_;
  ResourceLedger& ledger_;
  std::size_t rounds_ = 0;
  bool open_ = false;
  std::vector<Message> pending_;
  std::vector<Message> delivered_;
  std::vector<std::uint64_t> sent_now_, received_now_;
  std::uint64_t transcript_ = 0;
};

struct MpcReport {
  std::string protocol;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::size_t rounds = 0;
  std::vector<std::vector<std::uint64_t>> sent;      // [machine][round]
  std::vector<std::vector<std::uint64_t>> received;  // [machine][round]
  std::uint64_t transcript = 0;
  std::size_t sparsifier_edges = 0;
  double cost_sparsifier = 0.0;
  std::optional<double> p;      // dense branch sampling probability
  std::optional<double> delta;  // dense branch additive parameter
  std::vector<std::string> warnings;

  std::string to_json() const;
};

struct MpcResult {
  HCTree tree;
  Graph sparsifier;  // the graph the coordinator clustered
  Graph sampled;     // dense branch only: H, the reweighted sampled edges without the expander
  MpcReport report;
  ResourceLedger ledger;
};

/// Round 1: partial sketches go to the machine owning each vertex (contiguous id blocks of
/// ceil(n/k)). Round 2: owners send the summed sketches to the coordinator, which recovers a
/// sparsifier and clusters it.
MpcResult mpc_2round(std::size_t n, const std::vector<Machine>& machines, const SketchConfig& cfg, CutOracle& oracle,
                     std::size_t threads = 1);

struct OneRoundOptions {
  enum class Branch { automatic, dense, sparse };
  Branch branch = Branch::automatic;
  double C = 4.0;                // dense branch: p = min(1, C ln n / (eps^2 beta))
  std::size_t expander_degree = 16;
  double c_s = 1.0;              // sparse branch sketch constant
};

/// Single round. Dense branch (m >= n^(5/3) unless forced): each machine sends an independent
/// p-sample of its edges; the coordinator reweights them by 1/p and overlays an expander of
/// per-vertex weight 2 eps delta with delta = m^2/n^3. Sparse branch: all partial sketches go
/// straight to the coordinator.
MpcResult mpc_1round(std::size_t n, std::size_t m, const std::vector<Machine>& machines, double eps,
                     std::uint64_t seed, CutOracle& oracle, const OneRoundOptions& opt = {}, std::size_t threads = 1);

/// Dense-branch sampling probability and additive parameter for (n, m, eps).
double one_round_probability(std::size_t n, std::size_t m, double eps, double C);
double one_round_delta(std::size_t n, std::size_t m);

}  // namespace subhc

#endif  // SUBHC_MPC_HPP
