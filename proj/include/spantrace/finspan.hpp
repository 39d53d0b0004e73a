#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spantrace/error.hpp"

namespace spantrace {

/// The finite base set S. Compared by value.
struct BaseSet {
  std::vector<std::string> points;
  friend bool operator==(const BaseSet&, const BaseSet&) = default;
};
using BaseRef = std::shared_ptr<const BaseSet>;

BaseRef make_base(std::vector<std::string> points);
bool same_base(const BaseRef& a, const BaseRef& b);

/// Finite set over the base: distinct labels in a fixed order plus an anchor
/// map to base points (by index).
class FinOver {
 public:
  FinOver(BaseRef base, std::vector<std::string> labels, std::vector<std::size_t> anchor);

  const BaseRef& base() const noexcept { return base_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t anchor(std::size_t i) const { return anchor_.at(i); }
  const std::vector<std::size_t>& anchors() const noexcept { return anchor_; }
  std::optional<std::size_t> find(const std::string& label) const;

  friend bool operator==(const FinOver& a, const FinOver& b);

 private:
  BaseRef base_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> anchor_;
  std::unordered_map<std::string, std::size_t> index_;
};
using SetRef = std::shared_ptr<const FinOver>;

SetRef make_set(BaseRef base, std::vector<std::string> labels, std::vector<std::size_t> anchor);
/// The base itself as a set over the base (identity anchor).
SetRef base_set(const BaseRef& base);
bool same_set(const SetRef& a, const SetRef& b);

/// Map of sets over the base. Every such map has finite fibers, so it models
/// a proper morphism.
class OverMap {
 public:
  OverMap(SetRef source, SetRef target, std::vector<std::size_t> graph);

  static OverMap identity(const SetRef& x);
  /// Anchor map X -> S.
  static OverMap anchor_map(const SetRef& x);

  const SetRef& source() const noexcept { return source_; }
  const SetRef& target() const noexcept { return target_; }
  std::size_t operator()(std::size_t i) const { return graph_.at(i); }
  const std::vector<std::size_t>& graph() const noexcept { return graph_; }

  /// Elements of the source over target element y, in source order.
  std::vector<std::size_t> fiber(std::size_t y) const;

  friend bool operator==(const OverMap& a, const OverMap& b);

 private:
  SetRef source_;
  SetRef target_;
  std::vector<std::size_t> graph_;
};

/// g o f.
OverMap compose(const OverMap& g, const OverMap& f);

/// Chosen fiber product X x_Z Y: pairs (x, y) with f(x) = g(y), ordered
/// lexicographically by input order, labelled "(x,y)".
struct FiberProduct {
  SetRef apex;
  OverMap first;
  OverMap second;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;

  std::size_t at(std::size_t x, std::size_t y) const;
  std::optional<std::size_t> find(std::size_t x, std::size_t y) const;
};

FiberProduct fiber_product(const OverMap& f, const OverMap& g);
/// X x_S Y along the anchors.
FiberProduct product_over_base(const SetRef& x, const SetRef& y);
/// f x_S g : X x_S X' -> Y x_S Y'.
OverMap map_product(const OverMap& f, const OverMap& g, const FiberProduct& source,
                    const FiberProduct& target);

/// Correspondence X <- C -> Y.
struct Span {
  OverMap left;
  OverMap right;

  Span(OverMap l, OverMap r);
  static Span identity(const SetRef& x);

  const SetRef& apex() const noexcept { return left.source(); }
  const SetRef& from() const noexcept { return left.target(); }
  const SetRef& to() const noexcept { return right.target(); }

  friend bool operator==(const Span&, const Span&) = default;
};

struct SpanComposite {
  Span span;
  FiberProduct apex;
};

/// Apex C x_Y D, legs c_left o pr1 and d_right o pr2.
SpanComposite span_compose(const Span& c, const Span& d);
struct SpanTensor {
  Span span;
  FiberProduct apex;
  FiberProduct from;
  FiberProduct to;
};
/// Apex C x_S C', legs componentwise into X x_S X' and Y x_S Y'.
SpanTensor span_tensor(const Span& c, const Span& c2);

/// 2-cell between parallel spans: a map of apexes commuting with both legs.
struct SpanCell {
  Span source;
  Span target;
  OverMap graph;
};

/// Confirms target.left o graph = source.left and likewise on the right.
Verdict cell_check(const SpanCell& p);
/// Vertical composite: first p, then q.
SpanCell cell_vertical(const SpanCell& p, const SpanCell& q);

/// Leg-compatible bijection between apexes of parallel spans. image[i] is the
/// element of b matched with element i of a.
struct Bijection {
  std::vector<std::size_t> image;
  std::vector<std::size_t> inverse() const;
};

/// Finds a leg-compatible bijection a.apex -> b.apex if one exists. Groups
/// apex elements by (left image, right image) and pairs them in input order,
/// so the result is deterministic and exists iff the group sizes agree.
std::optional<Bijection> span_iso_search(const Span& a, const Span& b);
/// Checks that image is a bijection compatible with both legs.
Verdict check_bijection(const Span& a, const Span& b, const Bijection& bij);

}  // namespace spantrace
