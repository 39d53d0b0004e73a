#pragma once
// Random finite sets, maps and spans over a small base.

#include <random>
#include <string>

#include "spantrace/finspan.hpp"
#include "support.hpp"

namespace support {

inline SetRef random_set(std::mt19937_64& rng, const BaseRef& base, std::size_t max_size, const std::string& prefix) {
  const auto n = static_cast<std::size_t>(draw(rng, 0, static_cast<Scalar>(max_size)));
  std::vector<std::string> labels;
  std::vector<std::size_t> anchor;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(prefix + std::to_string(i));
    anchor.push_back(static_cast<std::size_t>(draw(rng, 0, static_cast<Scalar>(base->points.size() - 1))));
  }
  return make_set(base, std::move(labels), std::move(anchor));
}

/// A map x -> y over the base, or nothing if some anchor fiber of y is empty
/// where x needs it.
inline std::optional<OverMap> random_map(std::mt19937_64& rng, const SetRef& x, const SetRef& y) {
  std::vector<std::size_t> graph;
  for (std::size_t i = 0; i < x->size(); ++i) {
    std::vector<std::size_t> options;
    for (std::size_t j = 0; j < y->size(); ++j)
      if (y->anchor(j) == x->anchor(i)) options.push_back(j);
    if (options.empty()) return std::nullopt;
    graph.push_back(options[static_cast<std::size_t>(draw(rng, 0, static_cast<Scalar>(options.size() - 1)))]);
  }
  return OverMap(x, y, std::move(graph));
}

/// Random span x <= c => y with a fresh apex whose anchors are drawn from
/// base points where both x and y have elements.
inline Span random_span(std::mt19937_64& rng, const SetRef& x, const SetRef& y, std::size_t max_apex,
                        const std::string& prefix) {
  const BaseRef& base = x->base();
  std::vector<std::size_t> usable;
  for (std::size_t s = 0; s < base->points.size(); ++s) {
    bool in_x = false, in_y = false;
    for (auto a : x->anchors()) in_x |= a == s;
    for (auto a : y->anchors()) in_y |= a == s;
    if (in_x && in_y) usable.push_back(s);
  }
  std::vector<std::string> labels;
  std::vector<std::size_t> anchor;
  if (!usable.empty()) {
    const auto n = static_cast<std::size_t>(draw(rng, 0, static_cast<Scalar>(max_apex)));
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(prefix + std::to_string(i));
      anchor.push_back(usable[static_cast<std::size_t>(draw(rng, 0, static_cast<Scalar>(usable.size() - 1)))]);
    }
  }
  SetRef c = make_set(base, std::move(labels), std::move(anchor));
  return Span(*random_map(rng, c, x), *random_map(rng, c, y));
}

}  // namespace support
