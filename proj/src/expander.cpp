#include "subhc/expander.hpp"

#include <algorithm>
#include <numeric>

namespace subhc {

ExpanderGraph::ExpanderGraph(std::size_t n, std::size_t d, double edge_weight, std::uint64_t seed)
    : n_(n), d_(d), weight_(edge_weight) {
  if (n < 3) throw DomainError("expander needs n >= 3");
  if (d < 2 || d % 2 != 0) throw DomainError("expander degree must be even and >= 2");
  if (!(edge_weight > 0.0)) throw DomainError("expander edge weight must be positive");
  Rng rng(derive_seed(seed, 0xe4a));
  cycles_.resize(d / 2);
  position_.resize(d / 2);
  for (std::size_t c = 0; c < d / 2; ++c) {
    auto& cyc = cycles_[c];
    cyc.resize(n);
    std::iota(cyc.begin(), cyc.end(), Vertex{0});
    // Fisher-Yates with our own bounded draw keeps the cycles identical across standard libraries.
    for (std::size_t i = n - 1; i > 0; --i) std::swap(cyc[i], cyc[uniform_below(rng, i + 1)]);
    auto& pos = position_[c];
    pos.resize(n);
    for (std::size_t i = 0; i < n; ++i) pos[cyc[i]] = static_cast<std::uint32_t>(i);
  }
}

Vertex ExpanderGraph::slot_neighbor(Vertex v, std::size_t slot) const {
  if (v >= n_ || slot >= d_) throw DomainError("expander slot out of range");
  const std::size_t c = slot / 2;
  const std::size_t p = position_[c][v];
  const std::size_t q = slot % 2 == 0 ? (p + 1) % n_ : (p + n_ - 1) % n_;
  return cycles_[c][q];
}

std::vector<Edge> ExpanderGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(n_ * d_ / 2);
  for (const auto& cyc : cycles_)
    for (std::size_t i = 0; i < n_; ++i) out.push_back({cyc[i], cyc[(i + 1) % n_], weight_});
  return out;
}

ExpanderGraph build_expander(std::size_t n, std::size_t d, std::uint64_t seed, double edge_weight) {
  return ExpanderGraph(n, d, edge_weight, seed);
}

}  // namespace subhc
