#include "subhc/hctree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>

namespace subhc {

std::int32_t HCTree::add_leaf(Vertex v) {
  Node n;
  n.leaf = v;
  nodes_.push_back(n);
  const auto id = static_cast<std::int32_t>(nodes_.size() - 1);
  if (root_ == kNone) root_ = id;
  return id;
}

std::int32_t HCTree::add_internal(std::int32_t left, std::int32_t right) {
  if (left == right || left < 0 || right < 0 || left >= static_cast<std::int32_t>(nodes_.size()) ||
      right >= static_cast<std::int32_t>(nodes_.size()))
    throw DomainError("add_internal: bad child ids");
  if (nodes_[left].parent != kNone || nodes_[right].parent != kNone)
    throw DomainError("add_internal: child already has a parent");
  Node n;
  n.left = left;
  n.right = right;
  n.size = nodes_[left].size + nodes_[right].size;
  nodes_.push_back(n);
  const auto id = static_cast<std::int32_t>(nodes_.size() - 1);
  nodes_[left].parent = id;
  nodes_[right].parent = id;
  root_ = id;
  return id;
}

std::int32_t HCTree::graft(const HCTree& sub) {
  if (sub.empty()) throw DomainError("graft: empty tree");
  const auto offset = static_cast<std::int32_t>(nodes_.size());
  for (Node n : sub.nodes_) {
    if (!n.is_leaf()) {
      n.left += offset;
      n.right += offset;
    }
    if (n.parent != kNone) n.parent += offset;
    nodes_.push_back(n);
  }
  const std::int32_t r = sub.root_ + offset;
  if (root_ == kNone) root_ = r;
  return r;
}

HCTree HCTree::single(Vertex v) {
  HCTree t;
  t.add_leaf(v);
  return t;
}

HCTree HCTree::join(const HCTree& left, const HCTree& right) {
  HCTree t;
  const auto l = t.graft(left);
  const auto r = t.graft(right);
  t.add_internal(l, r);
  return t;
}

HCTree HCTree::balanced(std::span<const Vertex> leaves) {
  if (leaves.empty()) throw DomainError("balanced: no leaves");
  HCTree t;
  std::function<std::int32_t(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return t.add_leaf(leaves[lo]);
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto l = build(lo, mid);
    const auto r = build(mid, hi);
    return t.add_internal(l, r);
  };
  build(0, leaves.size());
  return t;
}

HCTree HCTree::random(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("random tree: n = 0");
  Rng rng(derive_seed(seed, 0x7ee));
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::shuffle(order.begin(), order.end(), rng);
  HCTree t;
  std::function<std::int32_t(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return t.add_leaf(order[lo]);
    const std::size_t cut = lo + 1 + uniform_below(rng, hi - lo - 1);
    const auto l = build(lo, cut);
    const auto r = build(cut, hi);
    return t.add_internal(l, r);
  };
  build(0, n);
  return t;
}

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos = 0;
  HCTree tree;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("tree: " + what + " at offset " + std::to_string(pos), 0);
  }
  std::int32_t parse_node() {
    skip();
    if (pos >= s.size()) fail("unexpected end");
    if (s[pos] == '(') {
      ++pos;
      const auto l = parse_node();
      skip();
      if (pos >= s.size() || s[pos] != ',') fail("expected ','");
      ++pos;
      const auto r = parse_node();
      skip();
      if (pos < s.size() && s[pos] == ',') throw DomainError("tree: non-binary node");
      if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
      ++pos;
      return tree.add_internal(l, r);
    }
    if (!std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected leaf id");
    std::uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + static_cast<std::uint64_t>(s[pos] - '0');
      if (v > 0xffffffffULL) fail("leaf id too large");
      ++pos;
    }
    return tree.add_leaf(static_cast<Vertex>(v));
  }
};

}  // namespace

HCTree HCTree::parse(std::string_view text) {
  Parser p{text, 0, HCTree{}};
  p.parse_node();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return std::move(p.tree);
}

std::string HCTree::to_string() const {
  if (empty()) return "";
  std::string out;
  std::function<void(std::int32_t)> emit = [&](std::int32_t id) {
    const Node& n = node(id);
    if (n.is_leaf()) {
      out += std::to_string(n.leaf);
      return;
    }
    out += '(';
    emit(n.left);
    out += ',';
    emit(n.right);
    out += ')';
  };
  emit(root_);
  return out;
}

void HCTree::validate(std::size_t n) const {
  if (empty()) throw DomainError("tree is empty");
  if (node(root_).parent != kNone) throw DomainError("tree root has a parent");
  std::vector<char> seen(n, 0);
  std::size_t count = 0;
  std::vector<std::int32_t> stack{root_};
  while (!stack.empty()) {
    const Node& x = node(stack.back());
    stack.pop_back();
    if (x.is_leaf()) {
      if (x.leaf >= n) throw DomainError("tree leaf " + std::to_string(x.leaf) + " is not a graph vertex");
      if (seen[x.leaf]) throw DomainError("tree leaf " + std::to_string(x.leaf) + " repeated");
      seen[x.leaf] = 1;
      ++count;
    } else {
      stack.push_back(x.left);
      stack.push_back(x.right);
    }
  }
  if (count != n) throw DomainError("tree leaves do not cover the vertex set");
}

std::vector<std::int32_t> HCTree::internal_nodes() const {
  std::vector<std::int32_t> out;
  if (empty()) return out;
  // post-order
  std::vector<std::pair<std::int32_t, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const Node& x = node(id);
    if (x.is_leaf()) continue;
    if (expanded) {
      out.push_back(id);
    } else {
      stack.push_back({id, true});
      stack.push_back({x.right, false});
      stack.push_back({x.left, false});
    }
  }
  return out;
}

std::vector<Vertex> HCTree::leaves_under(std::int32_t id) const {
  std::vector<Vertex> out;
  std::vector<std::int32_t> stack{id};
  while (!stack.empty()) {
    const Node& x = node(stack.back());
    stack.pop_back();
    if (x.is_leaf()) {
      out.push_back(x.leaf);
    } else {
      stack.push_back(x.right);
      stack.push_back(x.left);
    }
  }
  return out;
}

std::vector<std::int32_t> HCTree::leaf_index() const {
  std::vector<std::int32_t> idx(leaf_count(), kNone);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& x = nodes_[i];
    if (x.is_leaf() && x.leaf < idx.size()) idx[x.leaf] = static_cast<std::int32_t>(i);
  }
  return idx;
}

std::size_t HCTree::depth() const {
  if (empty()) return 0;
  std::size_t best = 0;
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    const Node& x = node(id);
    best = std::max(best, d);
    if (!x.is_leaf()) {
      stack.push_back({x.left, d + 1});
      stack.push_back({x.right, d + 1});
    }
  }
  return best;
}

std::uint64_t HCTree::split_product_sum() const {
  std::uint64_t s = 0;
  for (auto id : internal_nodes()) {
    const Node& x = node(id);
    s += static_cast<std::uint64_t>(node(x.left).size) * node(x.right).size;
  }
  return s;
}

}  // namespace subhc
