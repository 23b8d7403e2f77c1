#include "subhc/sketch.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <thread>

namespace subhc {

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::size_t ceil_log2(std::uint64_t x) { return x <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(x - 1)); }

std::uint64_t mod_prime(std::int64_t v) {
  const auto r = v % static_cast<std::int64_t>(kPrime);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(kPrime) : r);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kPrime);
}

// The three per-sampler hash keys: level assignment, bucket assignment, checksum.
struct SamplerKeys {
  std::uint64_t level, bucket, check;
  explicit SamplerKeys(std::uint64_t seed)
      : level(mix64(seed ^ 0xa1)), bucket(mix64(seed ^ 0xb2)), check(mix64(seed ^ 0xc3)) {}

  std::size_t level_of(std::uint64_t i, std::size_t levels) const {
    return std::min<std::size_t>(static_cast<std::size_t>(std::countr_zero(mix64(level ^ i))), levels - 1);
  }
  std::size_t bucket_of(std::uint64_t i, std::size_t l, std::size_t buckets) const {
    return static_cast<std::size_t>(mix64(bucket ^ (i * 64 + l)) % buckets);
  }
  std::uint64_t checksum_of(std::uint64_t i) const { return mix64(check ^ i) % kPrime; }
};

}  // namespace

SketchConfig SketchConfig::make(std::size_t n, double eps, std::uint64_t seed, double c_s, std::size_t weight_classes) {
  SketchConfig c;
  c.n = n;
  c.eps = eps;
  c.c_s = c_s;
  c.seed = seed;
  c.weight_classes = weight_classes;
  if (!(eps > 0 && eps <= 1)) throw DomainError("sketch eps must be in (0, 1]");
  if (!(c_s > 0)) throw DomainError("sketch constant c_s must be positive");
  const double ln = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  c.copies = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c_s * ln / (eps * eps))));
  c.levels = ceil_log2(std::max<std::uint64_t>(c.pair_count(), 1)) + 1;
  c.sampler_levels = c.levels;
  c.validate();
  return c;
}

std::size_t SketchConfig::classes_for(double max_weight) {
  if (!(max_weight >= 1.0) || !std::isfinite(max_weight)) throw DomainError("sketch weights must be >= 1");
  return static_cast<std::size_t>(std::ilogb(max_weight)) + 1;
}

void SketchConfig::validate() const {
  if (n == 0) throw DomainError("sketch config needs n >= 1");
  if (n > (std::size_t{1} << 31)) throw DomainError("sketch config: n too large");
  if (!(eps > 0 && eps <= 1)) throw DomainError("sketch eps must be in (0, 1]");
  if (copies == 0 || levels == 0 || sampler_levels == 0 || buckets == 0 || weight_classes == 0)
    throw DomainError("sketch config has an empty dimension");
  if (levels > 64 || sampler_levels > 64) throw DomainError("sketch config: too many levels");
}

std::uint64_t SketchConfig::pair_count() const noexcept {
  return static_cast<std::uint64_t>(n) * (n ? n - 1 : 0) / 2;
}

std::size_t SketchConfig::sampler_words() const noexcept { return sampler_levels * buckets * 4; }

std::size_t SketchConfig::cell_words() const noexcept { return weight_classes * levels * copies * sampler_words(); }

std::uint64_t SketchConfig::hash() const noexcept {
  return derive_seed(seed, n, std::bit_cast<std::uint64_t>(eps), std::bit_cast<std::uint64_t>(c_s), copies, levels,
                     sampler_levels, buckets, weight_classes);
}

double sketch_space_bound(const SketchConfig& cfg) {
  const double lg = std::max(1.0, std::log2(static_cast<double>(cfg.n)));
  return kSketchSpaceConstant * static_cast<double>(cfg.weight_classes) * lg * lg * lg / (cfg.eps * cfg.eps);
}

std::uint64_t pair_index(std::size_t n, Vertex a, Vertex b) {
  if (a == b || a >= n || b >= n) throw DomainError("pair_index: bad pair");
  if (a > b) std::swap(a, b);
  const std::uint64_t A = a, N = n;
  return A * (2 * N - A - 1) / 2 + (b - A - 1);
}

std::pair<Vertex, Vertex> pair_from_index(std::size_t n, std::uint64_t idx) {
  const std::uint64_t N = n;
  if (n < 2 || idx >= N * (N - 1) / 2) throw DomainError("pair_from_index: index out of range");
  auto start = [N](std::uint64_t a) { return a * (2 * N - a - 1) / 2; };
  std::uint64_t lo = 0, hi = N - 2;  // largest a with start(a) <= idx
  while (lo < hi) {
    const std::uint64_t mid = (lo + hi + 1) / 2;
    if (start(mid) <= idx)
      lo = mid;
    else
      hi = mid - 1;
  }
  return {static_cast<Vertex>(lo), static_cast<Vertex>(lo + 1 + (idx - start(lo)))};
}

std::int64_t fixed_weight(double w) {
  if (!(w > 0) || !(w * kWeightScale < 0x1.0p62)) throw DomainError("sketch weight out of range");
  return std::max<std::int64_t>(1, std::llround(w * kWeightScale));
}

SamplerShape SamplerShape::for_domain(std::uint64_t domain, std::uint64_t seed, std::size_t buckets) {
  if (buckets == 0) throw DomainError("sampler needs at least one bucket");
  SamplerShape s;
  s.domain = std::max<std::uint64_t>(domain, 1);
  s.levels = ceil_log2(s.domain) + 1;
  s.buckets = buckets;
  s.seed = seed;
  return s;
}

void l0_update(const SamplerShape& shape, std::span<std::uint64_t> cells, std::uint64_t index, std::int64_t value,
               std::int64_t weight_delta) {
  if (index >= shape.domain) throw DomainError("l0 index out of range");
  if (cells.size() != shape.words()) throw DomainError("l0 cell array has the wrong size");
  const SamplerKeys keys(shape.seed);
  const std::size_t top = keys.level_of(index, shape.levels);
  const std::uint64_t check = mulmod(mod_prime(value), keys.checksum_of(index));
  for (std::size_t l = 0; l <= top; ++l) {
    std::uint64_t* c = cells.data() + (l * shape.buckets + keys.bucket_of(index, l, shape.buckets)) * 4;
    c[0] += static_cast<std::uint64_t>(value);
    c[1] += static_cast<std::uint64_t>(value) * index;
    c[2] += static_cast<std::uint64_t>(weight_delta);
    c[3] = (c[3] + check) % kPrime;
  }
}

L0Result l0_extract(const SamplerShape& shape, std::span<const std::uint64_t> cells) {
  if (cells.size() != shape.words()) throw DomainError("l0 cell array has the wrong size");
  const SamplerKeys keys(shape.seed);
  bool nonzero = false;
  for (std::size_t l = shape.levels; l-- > 0;) {
    const std::uint64_t* level = cells.data() + l * shape.buckets * 4;
    if (std::all_of(level, level + shape.buckets * 4, [](std::uint64_t x) { return x == 0; })) continue;
    nonzero = true;
    for (std::size_t b = 0; b < shape.buckets; ++b) {
      const std::uint64_t* c = level + b * 4;
      const auto count = static_cast<std::int64_t>(c[0]);
      if (count == 0) continue;
      const auto sum = static_cast<std::int64_t>(c[1]);
      if (sum % count != 0) continue;
      const std::int64_t idx = sum / count;
      if (idx < 0 || static_cast<std::uint64_t>(idx) >= shape.domain) continue;
      const auto i = static_cast<std::uint64_t>(idx);
      if (keys.level_of(i, shape.levels) < l || keys.bucket_of(i, l, shape.buckets) != b) continue;
      if (c[3] != mulmod(mod_prime(count), keys.checksum_of(i))) continue;
      return {L0Result::Kind::found, i, count, static_cast<std::int64_t>(c[2])};
    }
  }
  return {nonzero ? L0Result::Kind::fail : L0Result::Kind::empty};
}

void add_cells(std::span<std::uint64_t> into, std::span<const std::uint64_t> from) {
  if (into.size() != from.size() || into.size() % 4) throw DomainError("sketch cell arrays differ in size");
  for (std::size_t i = 0; i < into.size(); i += 4) {
    into[i] += from[i];
    into[i + 1] += from[i + 1];
    into[i + 2] += from[i + 2];
    into[i + 3] = (into[i + 3] + from[i + 3]) % kPrime;
  }
}

L0Sampler::L0Sampler(std::uint64_t domain, std::uint64_t seed, std::size_t buckets)
    : shape_(SamplerShape::for_domain(domain, seed, buckets)), cells_(shape_.words(), 0) {}

void L0Sampler::update(std::uint64_t index, std::int64_t value, double weight) {
  l0_update(shape_, cells_, index, value, value * fixed_weight(weight));
}

L0Sampler& L0Sampler::operator+=(const L0Sampler& other) {
  if (shape_.domain != other.shape_.domain || shape_.seed != other.shape_.seed || shape_.buckets != other.shape_.buckets)
    throw DomainError("adding l0-samplers with different hash functions");
  add_cells(cells_, other.cells_);
  return *this;
}

std::uint64_t sampler_seed(const SketchConfig& cfg, std::size_t cls, std::size_t level, std::size_t copy) {
  return derive_seed(cfg.seed, 0x5e7c, cls, level, copy);
}

std::size_t edge_level(const SketchConfig& cfg, std::size_t cls, std::uint64_t pair) {
  const std::uint64_t h = mix64(derive_seed(cfg.seed, 0x5ab, cls) ^ mix64(pair));
  return std::min<std::size_t>(static_cast<std::size_t>(std::countr_zero(h)), cfg.levels - 1);
}

std::size_t weight_class(const SketchConfig& cfg, double w) {
  if (!(w >= 1.0) || !std::isfinite(w)) throw DomainError("sketch weights must be >= 1");
  const auto c = static_cast<std::size_t>(std::ilogb(w));
  if (c >= cfg.weight_classes) throw DomainError("edge weight above the configured weight classes");
  return c;
}

VertexSketch::VertexSketch(const SketchConfig& cfg, Vertex v) : cfg_(cfg), v_(v), cells_(cfg.cell_words(), 0) {
  cfg_.validate();
  if (v >= cfg.n) throw DomainError("sketch vertex out of range");
}

std::size_t VertexSketch::offset(std::size_t cls, std::size_t level, std::size_t copy) const {
  if (cls >= cfg_.weight_classes || level >= cfg_.levels || copy >= cfg_.copies)
    throw DomainError("sketch sampler coordinates out of range");
  return ((cls * cfg_.levels + level) * cfg_.copies + copy) * cfg_.sampler_words();
}

SamplerShape VertexSketch::shape(std::size_t cls, std::size_t level, std::size_t copy) const {
  SamplerShape s;
  s.domain = std::max<std::uint64_t>(cfg_.pair_count(), 1);
  s.levels = cfg_.sampler_levels;
  s.buckets = cfg_.buckets;
  s.seed = sampler_seed(cfg_, cls, level, copy);
  return s;
}

std::span<const std::uint64_t> VertexSketch::sampler(std::size_t cls, std::size_t level, std::size_t copy) const {
  return std::span<const std::uint64_t>(cells_).subspan(offset(cls, level, copy), cfg_.sampler_words());
}

void VertexSketch::add_edge(Vertex other, double w, int sign) {
  const std::uint64_t pair = pair_index(cfg_.n, v_, other);
  const std::size_t cls = weight_class(cfg_, w);
  const std::size_t top = edge_level(cfg_, cls, pair);
  const std::int64_t value = (v_ < other ? -1 : 1) * static_cast<std::int64_t>(sign);
  const std::int64_t weight = value * fixed_weight(w);
  for (std::size_t j = 0; j <= top; ++j)
    for (std::size_t r = 0; r < cfg_.copies; ++r)
      l0_update(shape(cls, j, r), std::span<std::uint64_t>(cells_).subspan(offset(cls, j, r), cfg_.sampler_words()),
                pair, value, weight);
}

VertexSketch& VertexSketch::operator+=(const VertexSketch& other) {
  if (cfg_.hash() != other.cfg_.hash()) throw DomainError("adding sketches built under different configs");
  add_cells(cells_, other.cells_);
  return *this;
}

bool VertexSketch::empty() const {
  return std::all_of(cells_.begin(), cells_.end(), [](std::uint64_t x) { return x == 0; });
}

std::vector<std::uint64_t> VertexSketch::serialize() const {
  std::vector<std::uint64_t> out;
  out.reserve(words());
  out.push_back(kMagic << 32 | kVersion);
  out.push_back(cfg_.hash());
  out.push_back(v_);
  out.push_back(cells_.size());
  out.insert(out.end(), cells_.begin(), cells_.end());
  return out;
}

VertexSketch VertexSketch::deserialize(std::span<const std::uint64_t> words, const SketchConfig& cfg) {
  if (words.size() < kHeaderWords) throw ParseError("sketch image shorter than its header", 0);
  if (words[0] != (kMagic << 32 | kVersion)) throw ParseError("sketch image has a bad magic/version word", 0);
  if (words[1] != cfg.hash()) throw ParseError("sketch image was built under a different config", 0);
  if (words[2] >= cfg.n) throw ParseError("sketch image names an out-of-range vertex", 0);
  if (words[3] != cfg.cell_words() || words.size() != kHeaderWords + words[3])
    throw ParseError("sketch image has the wrong length", 0);
  VertexSketch s(cfg, static_cast<Vertex>(words[2]));
  std::copy(words.begin() + kHeaderWords, words.end(), s.cells_.begin());
  return s;
}

void sketch_update(VertexSketch& s, const StreamEvent& e) {
  const Vertex v = s.vertex();
  if (e.u != v && e.v != v) throw DomainError("stream event does not touch the sketched vertex");
  s.add_edge(e.u == v ? e.v : e.u, e.w, e.op == StreamEvent::Op::insert ? 1 : -1);
}

std::vector<VertexSketch> empty_sketches(const SketchConfig& cfg) {
  cfg.validate();
  std::vector<VertexSketch> out;
  out.reserve(cfg.n);
  for (Vertex v = 0; v < cfg.n; ++v) out.emplace_back(cfg, v);
  return out;
}

std::vector<VertexSketch> sketch_graph(const Graph& g, const SketchConfig& cfg, std::size_t threads) {
  if (g.n() != cfg.n) throw DomainError("sketch config and graph disagree on n");
  auto out = empty_sketches(cfg);
  threads = std::max<std::size_t>(1, std::min(threads, g.n()));
  auto work = [&](std::size_t w) {
    for (Vertex v = static_cast<Vertex>(w); v < g.n(); v += static_cast<Vertex>(threads))
      for (const auto& nb : g.adjacency(v)) out[v].add_edge(nb.v, nb.w, 1);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  return out;
}

namespace {

struct DisjointSets {
  std::vector<Vertex> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), Vertex{0}); }
  Vertex find(Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

struct FoundEdge {
  std::uint64_t pair;
  Vertex a, b;  // a < b
  std::int64_t mult;
  std::int64_t weight;  // fixed-point, total over multiplicity
};

// Residual sketches of one (class, level): res[(v * t + r) * sw ...].
class Residual {
 public:
  Residual(std::span<const VertexSketch> sketches, std::size_t cls, std::size_t level)
      : n_(sketches.size()), t_(sketches[0].config().copies), sw_(sketches[0].config().sampler_words()),
        cells_(n_ * t_ * sw_) {
    for (std::size_t r = 0; r < t_; ++r) shapes_.push_back(sketches[0].shape(cls, level, r));
    for (std::size_t v = 0; v < n_; ++v)
      for (std::size_t r = 0; r < t_; ++r) {
        const auto src = sketches[v].sampler(cls, level, r);
        std::copy(src.begin(), src.end(), cells_.begin() + static_cast<std::ptrdiff_t>((v * t_ + r) * sw_));
      }
  }

  std::span<std::uint64_t> at(std::size_t v, std::size_t r) {
    return std::span<std::uint64_t>(cells_).subspan((v * t_ + r) * sw_, sw_);
  }
  const SamplerShape& shape(std::size_t r) const { return shapes_[r]; }
  std::size_t copies() const { return t_; }
  std::size_t sampler_words() const { return sw_; }

  void remove(const FoundEdge& e) {
    for (std::size_t r = 0; r < t_; ++r) {
      l0_update(shapes_[r], at(e.a, r), e.pair, e.mult, e.weight);
      l0_update(shapes_[r], at(e.b, r), e.pair, -e.mult, -e.weight);
    }
  }

 private:
  std::size_t n_, t_, sw_;
  std::vector<std::uint64_t> cells_;
  std::vector<SamplerShape> shapes_;
};

// One Boruvka spanning forest of the residual graph, starting each supernode at copy f and
// falling back to the other copies when a sampler fails.
std::vector<FoundEdge> peel_forest(Residual& res, std::size_t n, std::size_t f, RecoveryStats& stats) {
  DisjointSets dsu(n);
  std::vector<FoundEdge> forest;
  std::vector<std::uint64_t> sum(res.sampler_words());
  const std::size_t t = res.copies();
  for (;;) {
    std::map<Vertex, std::vector<Vertex>> comps;
    for (Vertex v = 0; v < n; ++v) comps[dsu.find(v)].push_back(v);
    std::vector<FoundEdge> proposals;
    std::size_t stuck = 0;
    for (const auto& [root, members] : comps) {
      bool done = false;
      for (std::size_t attempt = 0; attempt < t && !done; ++attempt) {
        const std::size_t r = (f + attempt) % t;
        std::fill(sum.begin(), sum.end(), 0);
        for (Vertex v : members) add_cells(sum, res.at(v, r));
        const L0Result got = l0_extract(res.shape(r), sum);
        if (got.kind == L0Result::Kind::empty) {
          done = true;
          break;
        }
        if (got.kind == L0Result::Kind::found) {
          const auto [a, b] = pair_from_index(n, got.index);
          const bool in_a = dsu.find(a) == root, in_b = dsu.find(b) == root;
          // the member endpoint carries -1 when it is the smaller id
          if (in_a != in_b && (got.value < 0) == in_a) {
            const std::int64_t mult = got.value < 0 ? -got.value : got.value;
            const std::int64_t weight = got.value < 0 ? -got.weight_fixed : got.weight_fixed;
            proposals.push_back({got.index, a, b, mult, weight});
            done = true;
            break;
          }
        }
        ++stats.sampler_failures;
      }
      // a stuck supernode may still be absorbed by a neighbour whose sampler succeeds
      stuck += !done;
    }
    bool merged = false;
    for (const auto& e : proposals)
      if (dsu.unite(e.a, e.b)) {
        forest.push_back(e);
        merged = true;
      }
    if (!merged && stuck)
      throw RecoveryError("sketch recovery stalled: every sampler copy failed for a nonempty supernode");
    if (!merged) return forest;
  }
}

// Unit-capacity s-t edge connectivity, stopping at cap.
std::size_t edge_connectivity(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges, Vertex s, Vertex t,
                              std::size_t cap) {
  std::vector<std::vector<std::size_t>> inc(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    inc[edges[i].first].push_back(i);
    inc[edges[i].second].push_back(i);
  }
  std::vector<int> flow(edges.size(), 0);  // +1: first -> second
  std::vector<std::ptrdiff_t> via(n);
  std::size_t paths = 0;
  while (paths < cap) {
    std::fill(via.begin(), via.end(), -1);
    via[s] = static_cast<std::ptrdiff_t>(edges.size());
    std::vector<Vertex> queue{s};
    for (std::size_t h = 0; h < queue.size() && via[t] < 0; ++h) {
      const Vertex x = queue[h];
      for (std::size_t i : inc[x]) {
        const bool forward = edges[i].first == x;
        const Vertex y = forward ? edges[i].second : edges[i].first;
        const int residual = forward ? 1 - flow[i] : 1 + flow[i];
        if (residual <= 0 || via[y] >= 0) continue;
        via[y] = static_cast<std::ptrdiff_t>(i);
        queue.push_back(y);
      }
    }
    if (via[t] < 0) break;
    for (Vertex y = t; y != s;) {
      const auto i = static_cast<std::size_t>(via[y]);
      const bool forward = edges[i].second == y;
      flow[i] += forward ? 1 : -1;
      y = forward ? edges[i].first : edges[i].second;
    }
    ++paths;
  }
  return paths;
}

}  // namespace

Graph recover_sparsifier(std::span<const VertexSketch> sketches, const SketchConfig& cfg, RecoveryStats* stats) {
  cfg.validate();
  if (sketches.size() != cfg.n) throw DomainError("recover_sparsifier needs one sketch per vertex");
  const std::uint64_t h = cfg.hash();
  for (std::size_t v = 0; v < sketches.size(); ++v)
    if (sketches[v].vertex() != v || sketches[v].config().hash() != h)
      throw DomainError("recover_sparsifier: sketch " + std::to_string(v) + " does not match the config");
  RecoveryStats local;
  RecoveryStats& st = stats ? *stats : local;
  st.certificate_edges.assign(cfg.levels, 0);
  const std::size_t n = cfg.n, t = cfg.copies;
  if (n < 2) return Graph(n, {});

  std::vector<Edge> out;
  for (std::size_t cls = 0; cls < cfg.weight_classes; ++cls) {
    // certificate of each subsampling level: pair -> total weight
    std::vector<std::map<std::uint64_t, double>> cert(cfg.levels);
    for (std::size_t j = 0; j < cfg.levels; ++j) {
      Residual res(sketches, cls, j);
      for (std::size_t f = 0; f < t; ++f) {
        const auto forest = peel_forest(res, n, f, st);
        if (forest.empty()) break;
        ++st.forests;
        for (const auto& e : forest) {
          cert[j][e.pair] = static_cast<double>(e.weight) / kWeightScale;
          res.remove(e);
        }
      }
      st.certificate_edges[j] += cert[j].size();
    }

    std::vector<std::vector<std::pair<Vertex, Vertex>>> level_edges(cfg.levels);
    std::map<std::uint64_t, double> seen;
    for (std::size_t j = 0; j < cfg.levels; ++j)
      for (const auto& [pair, w] : cert[j]) {
        level_edges[j].push_back(pair_from_index(n, pair));
        seen.emplace(pair, w);
      }
    for (const auto& [pair, w] : seen) {
      const auto [a, b] = pair_from_index(n, pair);
      std::size_t j = cfg.levels - 1;
      for (std::size_t i = 0; i < cfg.levels; ++i)
        if (edge_connectivity(n, level_edges[i], a, b, t) < t) {
          j = i;
          break;
        }
      if (cert[j].count(pair)) out.push_back({a, b, std::ldexp(w, static_cast<int>(j))});
    }
  }
  return Graph::merged(n, out);
}

std::string encode_words_le(std::span<const std::uint64_t> words) {
  std::string out(words.size() * 8, '\0');
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t b = 0; b < 8; ++b) out[i * 8 + b] = static_cast<char>(words[i] >> (8 * b) & 0xff);
  return out;
}

std::vector<std::uint64_t> decode_words_le(std::string_view bytes) {
  if (bytes.size() % 8) throw ParseError("word image length is not a multiple of 8", 0);
  std::vector<std::uint64_t> out(bytes.size() / 8, 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t b = 0; b < 8; ++b)
      out[i] |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i * 8 + b])) << (8 * b);
  return out;
}

}  // namespace subhc
