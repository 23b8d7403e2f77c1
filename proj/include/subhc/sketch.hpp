#ifndef SUBHC_SKETCH_HPP
#define SUBHC_SKETCH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subhc/graph.hpp"
#include "subhc/stream.hpp"

namespace subhc {

/// Shape of the vertex sketches. All hash functions derive from `seed`, so machines that agree on
/// the config produce sketches that can be added cell by cell.
struct SketchConfig {
  std::size_t n = 0;
  double eps = 0.5;
  double c_s = 1.0;
  std::size_t copies = 1;          // t = ceil(c_s eps^-2 ln n): samplers (and forests) per level
  std::size_t levels = 1;          // edge-subsampling levels; level j keeps an edge w.p. 2^-j
  std::size_t sampler_levels = 1;  // geometric levels inside one l0-sampler
  std::size_t buckets = 4;         // 1-sparse cells per sampler level
  std::size_t weight_classes = 1;  // class c holds weights in [2^c, 2^(c+1))
  std::uint64_t seed = 0;

  static SketchConfig make(std::size_t n, double eps, std::uint64_t seed, double c_s = 1.0,
                           std::size_t weight_classes = 1);
  /// Smallest class count covering weights up to max_weight (weights must be >= 1).
  static std::size_t classes_for(double max_weight);

  void validate() const;
  std::uint64_t pair_count() const noexcept;  // n(n-1)/2, the sketched vector's dimension
  std::size_t sampler_words() const noexcept;
  std::size_t cell_words() const noexcept;  // per vertex, without the serialization header
  std::uint64_t hash() const noexcept;
};

/// Declared constant for the per-class space bound c_s' eps^-2 log2^3 n (words per vertex).
constexpr double kSketchSpaceConstant = 128.0;
double sketch_space_bound(const SketchConfig& cfg);

/// Flattened index of the unordered pair {a, b} in [0, n(n-1)/2).
std::uint64_t pair_index(std::size_t n, Vertex a, Vertex b);
std::pair<Vertex, Vertex> pair_from_index(std::size_t n, std::uint64_t idx);

/// Weights travel through the sketch as fixed-point integers so that insert/delete cancel exactly.
constexpr double kWeightScale = 16777216.0;  // 2^24
std::int64_t fixed_weight(double w);

struct SamplerShape {
  std::uint64_t domain = 1;
  std::size_t levels = 1;
  std::size_t buckets = 4;
  std::uint64_t seed = 0;

  static SamplerShape for_domain(std::uint64_t domain, std::uint64_t seed, std::size_t buckets = 4);
  std::size_t words() const noexcept { return levels * buckets * 4; }
};

struct L0Result {
  enum class Kind { empty, fail, found };
  Kind kind = Kind::empty;
  std::uint64_t index = 0;
  std::int64_t value = 0;         // coordinate value at index
  std::int64_t weight_fixed = 0;  // fixed-point weight sum at index, signed like value

  double weight() const noexcept { return static_cast<double>(value < 0 ? -weight_fixed : weight_fixed) / kWeightScale; }
};

/// Adds `value` at `index` and `weight_delta` to the weight cells. Cells are (count, index sum,
/// weight sum, checksum mod 2^61-1), all wrapping, so updates commute exactly.
void l0_update(const SamplerShape& shape, std::span<std::uint64_t> cells, std::uint64_t index, std::int64_t value,
               std::int64_t weight_delta);
/// Scans levels from the deepest down; returns the first bucket that decodes as 1-sparse and passes
/// the checksum.
L0Result l0_extract(const SamplerShape& shape, std::span<const std::uint64_t> cells);
void add_cells(std::span<std::uint64_t> into, std::span<const std::uint64_t> from);

class L0Sampler {
 public:
  L0Sampler(std::uint64_t domain, std::uint64_t seed, std::size_t buckets = 4);

  void update(std::uint64_t index, std::int64_t value = 1, double weight = 1.0);
  L0Sampler& operator+=(const L0Sampler& other);
  L0Result extract() const { return l0_extract(shape_, cells_); }

  const SamplerShape& shape() const noexcept { return shape_; }
  std::span<const std::uint64_t> cells() const noexcept { return cells_; }
  friend bool operator==(const L0Sampler& a, const L0Sampler& b) { return a.cells_ == b.cells_; }

 private:
  SamplerShape shape_;
  std::vector<std::uint64_t> cells_;
};

/// Linear sketch of one vertex's signed incidence vector: for every weight class, subsampling
/// level and copy, an l0-sampler over pair indices. Entry {v, u} is -1 when v < u and +1 when
/// v > u, so summing the sketches of a vertex set cancels its internal edges.
class VertexSketch {
 public:
  static constexpr std::uint64_t kMagic = 0x534b4348;  // "SKCH"
  static constexpr std::uint64_t kVersion = 1;
  static constexpr std::size_t kHeaderWords = 4;

  VertexSketch(const SketchConfig& cfg, Vertex v);

  Vertex vertex() const noexcept { return v_; }
  const SketchConfig& config() const noexcept { return cfg_; }

  /// Adds `sign` copies of edge {vertex(), other} with weight w.
  void add_edge(Vertex other, double w, int sign = 1);
  VertexSketch& operator+=(const VertexSketch& other);

  SamplerShape shape(std::size_t cls, std::size_t level, std::size_t copy) const;
  std::span<const std::uint64_t> sampler(std::size_t cls, std::size_t level, std::size_t copy) const;
  std::span<const std::uint64_t> cells() const noexcept { return cells_; }
  bool empty() const;

  /// Serialized size in words (header + cells).
  std::size_t words() const noexcept { return kHeaderWords + cells_.size(); }
  std::vector<std::uint64_t> serialize() const;
  static VertexSketch deserialize(std::span<const std::uint64_t> words, const SketchConfig& cfg);

  friend bool operator==(const VertexSketch& a, const VertexSketch& b) {
    return a.v_ == b.v_ && a.cfg_.hash() == b.cfg_.hash() && a.cells_ == b.cells_;
  }

 private:
  std::size_t offset(std::size_t cls, std::size_t level, std::size_t copy) const;

  SketchConfig cfg_;
  Vertex v_;
  std::vector<std::uint64_t> cells_;
};

/// Hash-derived structure shared by every sketch under one config.
std::uint64_t sampler_seed(const SketchConfig& cfg, std::size_t cls, std::size_t level, std::size_t copy);
/// Deepest subsampling level that still contains the pair (levels are nested).
std::size_t edge_level(const SketchConfig& cfg, std::size_t cls, std::uint64_t pair);
std::size_t weight_class(const SketchConfig& cfg, double w);

/// Applies one stream event to the sketch of one of its endpoints.
void sketch_update(VertexSketch& s, const StreamEvent& e);

std::vector<VertexSketch> empty_sketches(const SketchConfig& cfg);
/// Sketches of every vertex of g; vertices are split across `threads` workers.
std::vector<VertexSketch> sketch_graph(const Graph& g, const SketchConfig& cfg, std::size_t threads = 1);

struct RecoveryStats {
  std::uint64_t forests = 0;
  std::uint64_t sampler_failures = 0;
  std::vector<std::size_t> certificate_edges;  // per subsampling level, summed over classes
};

/// Spanning-forest peeling on every (class, level): t rounds of Boruvka over supernode sketch
/// sums, each found forest subtracted from the residual sketches. An edge is kept with weight
/// 2^j w_e at the first level j whose certificate leaves its endpoints less than t-connected.
Graph recover_sparsifier(std::span<const VertexSketch> sketches, const SketchConfig& cfg, RecoveryStats* stats = nullptr);

/// Little-endian byte image of a word array, and back.
std::string encode_words_le(std::span<const std::uint64_t> words);
std::vector<std::uint64_t> decode_words_le(std::string_view bytes);

}  // namespace subhc

#endif  // SUBHC_SKETCH_HPP
