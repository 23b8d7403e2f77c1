#include "subhc/oracle.hpp"

namespace subhc {

std::size_t weight_class_of(double w, double eps) {
  if (!(w >= 1.0)) throw DomainError("weights must be >= 1");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  auto i = static_cast<std::size_t>(std::floor(std::log(w) / std::log1p(eps))) + 1;
  while (i > 1 && w < weight_class_floor(eps, i)) --i;
  while (w >= weight_class_floor(eps, i + 1)) ++i;
  return i;
}

std::size_t first_index_at_least(QueryOracle& o, Vertex v, std::size_t degree, double threshold) {
  std::size_t lo = 1, hi = degree + 1;  // answer in [lo, hi]
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (o.weighted_neighbor(v, mid).second >= threshold)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

std::pair<std::size_t, std::size_t> weight_class_bounds(QueryOracle& o, Vertex v, std::size_t i, double eps) {
  if (o.variant() != QueryOracle::Variant::weight_sorted)
    throw DomainError("weight_class_bounds needs the weight-sorted oracle");
  if (i < 1) throw DomainError("weight classes are numbered from 1");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  const std::size_t d = o.degree(v);
  const std::size_t lo = i == 1 ? 1 : first_index_at_least(o, v, d, weight_class_floor(eps, i));
  const std::size_t next = first_index_at_least(o, v, d, weight_class_floor(eps, i + 1));
  return {lo, next - 1};
}

}  // namespace subhc
