#ifndef SUBHC_STREAM_HPP
#define SUBHC_STREAM_HPP

#include <fstream>
#include <istream>
#include <optional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "subhc/graph.hpp"

namespace subhc {

struct StreamEvent {
  enum class Op { insert, erase };
  Op op = Op::insert;
  Vertex u = 0;
  Vertex v = 0;
  double w = 1.0;

  friend bool operator==(const StreamEvent&, const StreamEvent&) = default;
};

/// Tracks which edges are present so deletes of absent edges (and repeated inserts)
/// are rejected eagerly. A delete must carry the weight the edge was inserted with.
/// Lives outside the streaming memory ledger.
class StreamValidator {
 public:
  /// Throws ParseError (with `line` when nonzero) on an invalid event.
  void apply(const StreamEvent& e, std::size_t line = 0);
  std::size_t present() const noexcept { return edges_.size(); }

 private:
  std::map<std::pair<Vertex, Vertex>, double> edges_;
};

/// Parses one "+ u v [w]" / "- u v [w]" line; nullopt for blank or comment-only lines.
std::optional<StreamEvent> parse_stream_line(const std::string& line, std::size_t lineno);

/// Whole-file parse with validation.
std::vector<StreamEvent> stream_from_file(const std::string& path);
std::vector<StreamEvent> stream_from(std::istream& in);
void write_stream(std::ostream& out, const std::vector<StreamEvent>& events);

/// Applies events in order to an empty graph on n vertices (the naive replay).
Graph replay_stream(const std::vector<StreamEvent>& events, std::size_t n);

/// Forward-only event source: the streaming pipeline sees each event exactly once.
class EventSource {
 public:
  virtual ~EventSource() = default;
  virtual std::optional<StreamEvent> next() = 0;
};

class VectorEventSource final : public EventSource {
 public:
  explicit VectorEventSource(const std::vector<StreamEvent>& events) : events_(&events) {}
  std::optional<StreamEvent> next() override {
    if (pos_ >= events_->size()) return std::nullopt;
    return (*events_)[pos_++];
  }

 private:
  const std::vector<StreamEvent>* events_;
  std::size_t pos_ = 0;
};

/// Lazily parses and validates a stream file line by line.
class FileEventSource final : public EventSource {
 public:
  explicit FileEventSource(const std::string& path);
  std::optional<StreamEvent> next() override;

 private:
  std::ifstream in_;
  std::size_t line_ = 0;
  StreamValidator validator_;
};

}  // namespace subhc

#endif  // SUBHC_STREAM_HPP
