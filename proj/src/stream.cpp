#include "subhc/stream.hpp"

#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace subhc {

void StreamValidator::apply(const StreamEvent& e, std::size_t line) {
  if (e.u == e.v) throw ParseError("self loop", line);
  const auto key = std::minmax(e.u, e.v);
  const std::pair<Vertex, Vertex> k{key.first, key.second};
  const std::string name = std::to_string(k.first) + "-" + std::to_string(k.second);
  if (e.op == StreamEvent::Op::insert) {
    if (!edges_.emplace(k, e.w).second) throw ParseError("insert of present edge " + name, line);
    return;
  }
  auto it = edges_.find(k);
  if (it == edges_.end()) throw ParseError("delete of absent edge " + name, line);
  if (it->second != e.w) throw ParseError("delete weight differs from inserted weight for edge " + name, line);
  edges_.erase(it);
}

std::optional<StreamEvent> parse_stream_line(const std::string& raw, std::size_t lineno) {
  std::string line = raw.substr(0, raw.find('#'));
  std::istringstream ss(line);
  std::string op;
  if (!(ss >> op)) return std::nullopt;
  StreamEvent e;
  if (op == "+")
    e.op = StreamEvent::Op::insert;
  else if (op == "-")
    e.op = StreamEvent::Op::erase;
  else
    throw ParseError("expected '+' or '-'", lineno);
  std::int64_t u, v;
  if (!(ss >> u >> v)) throw ParseError("expected two vertex ids", lineno);
  if (u < 0 || v < 0 || u > std::numeric_limits<Vertex>::max() || v > std::numeric_limits<Vertex>::max())
    throw ParseError("vertex id out of range", lineno);
  e.u = static_cast<Vertex>(u);
  e.v = static_cast<Vertex>(v);
  if (!(ss >> e.w)) {
    if (!ss.eof()) throw ParseError("bad weight", lineno);
    e.w = 1.0;
  } else if (!(e.w > 0.0)) {
    throw ParseError("weight must be positive", lineno);
  }
  std::string extra;
  ss.clear();
  if (ss >> extra) throw ParseError("trailing tokens", lineno);
  return e;
}

std::vector<StreamEvent> stream_from(std::istream& in) {
  std::vector<StreamEvent> out;
  StreamValidator validator;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto e = parse_stream_line(line, lineno)) {
      validator.apply(*e, lineno);
      out.push_back(*e);
    }
  }
  return out;
}

std::vector<StreamEvent> stream_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return stream_from(in);
}

void write_stream(std::ostream& out, const std::vector<StreamEvent>& events) {
  out << std::setprecision(17);
  for (const auto& e : events) {
    out << (e.op == StreamEvent::Op::insert ? "+ " : "- ") << e.u << ' ' << e.v;
    if (e.w != 1.0) out << ' ' << e.w;
    out << '\n';
  }
}

Graph replay_stream(const std::vector<StreamEvent>& events, std::size_t n) {
  std::map<std::pair<Vertex, Vertex>, double> present;
  for (const auto& e : events) {
    if (e.u >= n || e.v >= n) throw DomainError("stream endpoint out of range");
    const auto key = std::minmax(e.u, e.v);
    if (e.op == StreamEvent::Op::insert)
      present[{key.first, key.second}] = e.w;
    else
      present.erase({key.first, key.second});
  }
  std::vector<Edge> edges;
  for (const auto& [k, w] : present) edges.push_back({k.first, k.second, w});
  return Graph(n, std::move(edges));
}

FileEventSource::FileEventSource(const std::string& path) : in_(path) {
  if (!in_) throw ParseError("cannot open " + path, 0);
}

std::optional<StreamEvent> FileEventSource::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (auto e = parse_stream_line(line, line_)) {
      validator_.apply(*e, line_);
      return e;
    }
  }
  return std::nullopt;
}

}  // namespace subhc
