#include "spantrace/span_expr.hpp"

#include <map>
#include <optional>
#include <tuple>

namespace spantrace {

struct SpanExpr::Node {
  Kind kind;
  std::string name;
  std::optional<Span> span;
  SetRef set;
  BaseRef base;
  std::shared_ptr<const Node> lhs, rhs;
};

SpanExpr SpanExpr::leaf(std::string name, Span span) {
  return SpanExpr(std::make_shared<const Node>(Node{Kind::Leaf, std::move(name), std::move(span), {}, {}, {}, {}}));
}

SpanExpr SpanExpr::identity(const SetRef& x) {
  return SpanExpr(std::make_shared<const Node>(Node{Kind::Identity, {}, {}, x, {}, {}, {}}));
}

SpanExpr SpanExpr::unit(const BaseRef& base) {
  return SpanExpr(std::make_shared<const Node>(Node{Kind::Unit, {}, {}, {}, base, {}, {}}));
}

SpanExpr SpanExpr::compose(SpanExpr first, SpanExpr second) {
  return SpanExpr(std::make_shared<const Node>(Node{Kind::Compose, {}, {}, {}, {}, first.node_, second.node_}));
}

SpanExpr SpanExpr::tensor(SpanExpr a, SpanExpr b) {
  return SpanExpr(std::make_shared<const Node>(Node{Kind::Tensor, {}, {}, {}, {}, a.node_, b.node_}));
}

SpanExpr::Evaluated SpanExpr::evaluate() const { return eval(*node_); }

SpanExpr::Evaluated SpanExpr::eval(const Node& n) {
  switch (n.kind) {
    case Kind::Leaf: {
      Evaluated out{*n.span, {}, {n.name}};
      for (std::size_t i = 0; i < n.span->apex()->size(); ++i) out.coords.push_back({i});
      return out;
    }
    case Kind::Identity:
      return Evaluated{Span::identity(n.set), std::vector<std::vector<std::size_t>>(n.set->size()), {}};
    case Kind::Unit: {
      const SetRef s = base_set(n.base);
      return Evaluated{Span::identity(s), std::vector<std::vector<std::size_t>>(s->size()), {}};
    }
    case Kind::Compose:
    case Kind::Tensor: {
      Evaluated a = eval(*n.lhs);
      Evaluated b = eval(*n.rhs);
      Evaluated out{a.span, {}, a.leaf_names};
      out.leaf_names.insert(out.leaf_names.end(), b.leaf_names.begin(), b.leaf_names.end());
      std::optional<SpanComposite> comp;
      std::optional<SpanTensor> tens;
      const FiberProduct* apex;
      if (n.kind == Kind::Compose) {
        comp = span_compose(a.span, b.span);
        out.span = comp->span;
        apex = &comp->apex;
      } else {
        tens = span_tensor(a.span, b.span);
        out.span = tens->span;
        apex = &tens->apex;
      }
      for (std::size_t k = 0; k < apex->apex->size(); ++k) {
        std::vector<std::size_t> c = a.coords[apex->first(k)];
        const auto& cb = b.coords[apex->second(k)];
        c.insert(c.end(), cb.begin(), cb.end());
        out.coords.push_back(std::move(c));
      }
      return out;
    }
  }
  throw Error("span expression: unknown node");
}

Bijection canonical_recoord(const SpanExpr& a, const SpanExpr& b) {
  const SpanExpr::Evaluated ea = a.evaluate();
  const SpanExpr::Evaluated eb = b.evaluate();
  if (ea.leaf_names != eb.leaf_names) throw Error("canonical_recoord: expressions use different leaves");
  const bool same_from = same_set(ea.span.from(), eb.span.from());
  const bool same_to = same_set(ea.span.to(), eb.span.to());
  if (ea.span.apex()->size() != eb.span.apex()->size())
    throw Error("canonical_recoord: expressions are not parallel (apex sizes differ)");

  using Key = std::tuple<std::vector<std::size_t>, std::size_t, std::size_t>;
  auto key = [&](const SpanExpr::Evaluated& e, std::size_t i) {
    return Key{e.coords[i], same_from ? e.span.left(i) : 0, same_to ? e.span.right(i) : 0};
  };
  std::map<Key, std::size_t> where;
  for (std::size_t j = 0; j < eb.span.apex()->size(); ++j)
    if (!where.emplace(key(eb, j), j).second)
      throw Error("canonical_recoord: coordinates do not determine apex elements");
  Bijection bij;
  for (std::size_t i = 0; i < ea.span.apex()->size(); ++i) {
    auto it = where.find(key(ea, i));
    if (it == where.end()) throw Error("canonical_recoord: no partner for '" + ea.span.apex()->label(i) + "'");
    bij.image.push_back(it->second);
  }
  std::vector<bool> hit(bij.image.size(), false);
  for (std::size_t j : bij.image) {
    if (hit[j]) throw Error("canonical_recoord: match is not injective");
    hit[j] = true;
  }
  if (same_from && same_to) {
    const Verdict v = check_bijection(ea.span, eb.span, bij);
    if (!v) throw Error("canonical_recoord: " + v.detail);
  }
  return bij;
}

}  // namespace spantrace
