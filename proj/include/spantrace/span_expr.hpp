#pragma once

#include <memory>
#include <string>
#include <vector>

#include "spantrace/finspan.hpp"

namespace spantrace {

/// Expression tree over spans: named leaves, identities, the unit span, and
/// the two composition laws. Used to certify the associativity and unit
/// bijections between the chosen fiber products.
class SpanExpr {
 public:
  static SpanExpr leaf(std::string name, Span span);
  static SpanExpr identity(const SetRef& x);
  /// S <= S => S.
  static SpanExpr unit(const BaseRef& base);
  /// first, then second.
  static SpanExpr compose(SpanExpr first, SpanExpr second);
  static SpanExpr tensor(SpanExpr a, SpanExpr b);

  struct Evaluated {
    Span span;
    /// Per apex element, the apex elements of the named leaves it is built
    /// from, in left-to-right leaf order. Identity and unit leaves add nothing.
    std::vector<std::vector<std::size_t>> coords;
    std::vector<std::string> leaf_names;
  };

  Evaluated evaluate() const;

 private:
  enum class Kind { Leaf, Identity, Unit, Compose, Tensor };
  struct Node;
  explicit SpanExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Evaluated eval(const Node& n);
  std::shared_ptr<const Node> node_;
};

/// Explicit bijection between the apexes of two expressions built from the same
/// leaves: elements are matched by their leaf coordinates, and by their leg
/// images wherever the two expressions share a boundary set. Throws when the
/// expressions are not parallel or the match is not a bijection.
Bijection canonical_recoord(const SpanExpr& a, const SpanExpr& b);

}  // namespace spantrace
