#include "subhc/streaming.hpp"

#include <cmath>

#include <json.hpp>

#include "subhc/cost.hpp"

namespace subhc {

std::uint64_t stream_memory_bound(const SketchConfig& cfg) {
  const auto per_vertex = static_cast<std::uint64_t>(std::ceil(sketch_space_bound(cfg)));
  return cfg.n * (per_vertex + VertexSketch::kHeaderWords + kStreamVertexOverhead);
}

StreamSparsifyResult stream_sparsify(EventSource& events, const SketchConfig& cfg, ResourceLedger* ledger) {
  auto sketches = empty_sketches(cfg);
  const std::uint64_t words = cfg.n * (sketches.empty() ? 0 : sketches[0].words() + kStreamVertexOverhead);
  ResourceLedger local;
  ResourceLedger& led = ledger ? *ledger : local;
  led.observe_stream_words(words);

  StreamValidator validator;
  StreamSparsifyResult out;
  while (auto e = events.next()) {
    ++out.events;
    if (e->u >= cfg.n || e->v >= cfg.n) throw DomainError("stream event endpoint out of range");
    validator.apply(*e, static_cast<std::size_t>(out.events));
    sketch_update(sketches[e->u], *e);
    sketch_update(sketches[e->v], *e);
    led.observe_stream_words(words);
  }
  out.peak_words = led.stream_words();
  out.sparsifier = recover_sparsifier(sketches, cfg, &out.stats);
  return out;
}

StreamSparsifyResult stream_sparsify(const std::vector<StreamEvent>& events, const SketchConfig& cfg,
                                     ResourceLedger* ledger) {
  VectorEventSource src(events);
  return stream_sparsify(src, cfg, ledger);
}

std::string StreamReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["eps"] = eps;
  j["seed"] = seed;
  j["copies"] = copies;
  j["events"] = events;
  j["sketch_words_per_vertex"] = sketch_words_per_vertex;
  j["peak_words"] = peak_words;
  j["memory_bound"] = memory_bound;
  j["sparsifier_edges"] = sparsifier_edges;
  j["cost_sparsifier"] = cost_sparsifier;
  return j.dump();
}

StreamHcResult stream_hc(EventSource& events, const SketchConfig& cfg, CutOracle& oracle) {
  auto sp = stream_sparsify(events, cfg);
  StreamHcResult out;
  out.tree = recursive_hc(sp.sparsifier, oracle);
  out.report.n = cfg.n;
  out.report.eps = cfg.eps;
  out.report.seed = cfg.seed;
  out.report.copies = cfg.copies;
  out.report.events = sp.events;
  out.report.sketch_words_per_vertex = VertexSketch::kHeaderWords + cfg.cell_words();
  out.report.peak_words = sp.peak_words;
  out.report.memory_bound = stream_memory_bound(cfg);
  out.report.sparsifier_edges = sp.sparsifier.m();
  out.report.cost_sparsifier = cost_edge_form(sp.sparsifier, out.tree);
  out.sparsifier = std::move(sp.sparsifier);
  return out;
}

StreamHcResult stream_hc(const std::vector<StreamEvent>& events, const SketchConfig& cfg, CutOracle& oracle) {
  VectorEventSource src(events);
  return stream_hc(src, cfg, oracle);
}

std::vector<StreamEvent> insertion_stream(const Graph& g) {
  std::vector<StreamEvent> out;
  out.reserve(g.m());
  for (const auto& e : g.edges()) out.push_back({StreamEvent::Op::insert, e.u, e.v, e.w});
  return out;
}

}  // namespace subhc
