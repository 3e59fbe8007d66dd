#pragma once

// Unchecked entry points shared by the library sources.

#include <vector>

#include "measures/log_weight.hpp"
#include "measures/measure.hpp"

namespace measures::detail {

LogWeight logdensity_unchecked(const Measure& mu, const Point& x);
Measure base_unchecked(const Measure& mu, const Point& x);
LogWeight relative(const Measure& mu, const Measure& nu, const Point& x);
std::vector<Measure> chain_unchecked(const Measure& mu, const Point& x);

// Weighted node with nested weights merged and a zero weight dropped.
Measure weighted(LogWeight w, const Measure& mu);
inline Measure product_node(std::vector<Measure> factors) {
  return Measure(Node{ProductNode{std::move(factors)}});
}
inline Measure power_node(Measure element, std::vector<std::size_t> shape, std::size_t count) {
  return Measure(Node{PowerNode{std::move(element), std::move(shape), count}});
}
inline Measure superposition_node(Measure a, Measure b) {
  return Measure(Node{SuperpositionNode{std::move(a), std::move(b)}});
}
inline Measure pushforward_node(AffineMap map, Measure source) {
  return Measure(Node{PushforwardNode{std::move(map), std::move(source)}});
}

}  // namespace measures::detail
