#ifndef SUBHC_STREAMING_HPP
#define SUBHC_STREAMING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "subhc/cluster.hpp"
#include "subhc/ledger.hpp"
#include "subhc/sketch.hpp"
#include "subhc/stream.hpp"

namespace subhc {

/// Bookkeeping words charged per vertex on top of its sketch (id and cursor).
constexpr std::uint64_t kStreamVertexOverhead = 2;

/// Declared ceiling on the stream working set: n (c_s' eps^-2 log2^3 n + header + overhead).
std::uint64_t stream_memory_bound(const SketchConfig& cfg);

struct StreamSparsifyResult {
  Graph sparsifier;
  std::uint64_t events = 0;
  std::uint64_t peak_words = 0;
  RecoveryStats stats;
};

/// One forward pass over `events`: every event is validated (outside the memory ledger) and
/// applied to the sketches of both endpoints; the sparsifier is recovered after the pass.
StreamSparsifyResult stream_sparsify(EventSource& events, const SketchConfig& cfg, ResourceLedger* ledger = nullptr);
StreamSparsifyResult stream_sparsify(const std::vector<StreamEvent>& events, const SketchConfig& cfg,
                                     ResourceLedger* ledger = nullptr);

struct StreamReport {
  std::size_t n = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::size_t copies = 0;
  std::uint64_t events = 0;
  std::uint64_t sketch_words_per_vertex = 0;
  std::uint64_t peak_words = 0;
  std::uint64_t memory_bound = 0;
  std::size_t sparsifier_edges = 0;
  double cost_sparsifier = 0.0;

  std::string to_json() const;
};

struct StreamHcResult {
  HCTree tree;
  Graph sparsifier;
  StreamReport report;
};

/// stream_sparsify, then recursive_hc on the recovered graph.
StreamHcResult stream_hc(EventSource& events, const SketchConfig& cfg, CutOracle& oracle);
StreamHcResult stream_hc(const std::vector<StreamEvent>& events, const SketchConfig& cfg, CutOracle& oracle);

/// Insert events for every edge of g, in edge-list order.
std::vector<StreamEvent> insertion_stream(const Graph& g);

}  // namespace subhc

#endif  // SUBHC_STREAMING_HPP
