#ifndef SUBHC_HCTREE_HPP
#define SUBHC_HCTREE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subhc/types.hpp"

namespace subhc {

/// Full binary hierarchy whose leaves are graph vertices.
///
/// Nodes live in one array; every internal node has exactly two children and caches
/// its leaf count |S|. Built bottom-up with add_leaf / add_internal; the last internal
/// node added (or the single leaf) is the root.
class HCTree {
 public:
  static constexpr std::int32_t kNone = -1;

  struct Node {
    std::int32_t left = kNone;
    std::int32_t right = kNone;
    std::int32_t parent = kNone;
    Vertex leaf = 0;
    std::size_t size = 1;
    bool is_leaf() const noexcept { return left == kNone; }
  };

  HCTree() = default;

  std::int32_t add_leaf(Vertex v);
  std::int32_t add_internal(std::int32_t left, std::int32_t right);
  /// Appends a copy of `sub`, returning the id of its root in this tree.
  std::int32_t graft(const HCTree& sub);

  static HCTree single(Vertex v);
  static HCTree join(const HCTree& left, const HCTree& right);
  /// Balanced tree over the given leaves in order.
  static HCTree balanced(std::span<const Vertex> leaves);
  /// Random full binary tree over leaves 0..n-1: uniform random split sizes, uniformly shuffled leaves.
  static HCTree random(std::size_t n, std::uint64_t seed);

  /// Parses nested parentheses such as "((0,1),(2,3))"; rejects non-binary nodes.
  static HCTree parse(std::string_view text);
  std::string to_string() const;

  /// Throws DomainError unless the leaves are exactly 0..n-1, each once.
  void validate(std::size_t n) const;

  bool empty() const noexcept { return nodes_.empty(); }
  std::int32_t root() const noexcept { return root_; }
  const Node& node(std::int32_t id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t leaf_count() const { return empty() ? 0 : node(root_).size; }
  /// Ids of internal nodes, children always before parents.
  std::vector<std::int32_t> internal_nodes() const;
  std::vector<Vertex> leaves_under(std::int32_t id) const;
  /// Leaf node id for each vertex (size = leaf_count); requires a validated tree.
  std::vector<std::int32_t> leaf_index() const;
  std::size_t depth() const;
  /// Sum over splits of |S_l| * |S_r|.
  std::uint64_t split_product_sum() const;

 private:
  std::vector<Node> nodes_;
  std::int32_t root_ = kNone;
};

}  // namespace subhc

#endif  // SUBHC_HCTREE_HPP
