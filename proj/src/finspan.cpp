#include "spantrace/finspan.hpp"

#include <algorithm>
#include <set>

namespace spantrace {

BaseRef make_base(std::vector<std::string> points) {
  std::set<std::string> seen(points.begin(), points.end());
  if (seen.size() != points.size()) throw Error("base: duplicate point labels");
  return std::make_shared<const BaseSet>(BaseSet{std::move(points)});
}

bool same_base(const BaseRef& a, const BaseRef& b) { return a == b || (a && b && *a == *b); }

FinOver::FinOver(BaseRef base, std::vector<std::string> labels, std::vector<std::size_t> anchor)
    : base_(std::move(base)), labels_(std::move(labels)), anchor_(std::move(anchor)) {
  if (!base_) throw Error("set over base: null base");
  if (anchor_.size() != labels_.size()) throw Error("set over base: anchor is not total");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (anchor_[i] >= base_->points.size())
      throw Error("set over base: anchor of '" + labels_[i] + "' out of range");
    if (!index_.emplace(labels_[i], i).second)
      throw Error("set over base: duplicate label '" + labels_[i] + "'");
  }
}

std::optional<std::size_t> FinOver::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const FinOver& a, const FinOver& b) {
  return same_base(a.base_, b.base_) && a.labels_ == b.labels_ && a.anchor_ == b.anchor_;
}

SetRef make_set(BaseRef base, std::vector<std::string> labels, std::vector<std::size_t> anchor) {
  return std::make_shared<const FinOver>(std::move(base), std::move(labels), std::move(anchor));
}

SetRef base_set(const BaseRef& base) {
  std::vector<std::size_t> anchor(base->points.size());
  for (std::size_t i = 0; i < anchor.size(); ++i) anchor[i] = i;
  return make_set(base, base->points, std::move(anchor));
}

bool same_set(const SetRef& a, const SetRef& b) { return a == b || (a && b && *a == *b); }

// ---------------------------------------------------------------------------

OverMap::OverMap(SetRef source, SetRef target, std::vector<std::size_t> graph)
    : source_(std::move(source)), target_(std::move(target)), graph_(std::move(graph)) {
  if (!same_base(source_->base(), target_->base())) throw Error("map: base mismatch");
  if (graph_.size() != source_->size()) throw Error("map: graph is not total");
  for (std::size_t i = 0; i < graph_.size(); ++i) {
    if (graph_[i] >= target_->size())
      throw Error("map: image of '" + source_->label(i) + "' out of range");
    if (target_->anchor(graph_[i]) != source_->anchor(i))
      throw Error("map: '" + source_->label(i) + "' -> '" + target_->label(graph_[i]) +
                  "' does not commute with anchors");
  }
}

OverMap OverMap::identity(const SetRef& x) {
  std::vector<std::size_t> g(x->size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = i;
  return OverMap(x, x, std::move(g));
}

OverMap OverMap::anchor_map(const SetRef& x) { return OverMap(x, base_set(x->base()), x->anchors()); }

std::vector<std::size_t> OverMap::fiber(std::size_t y) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < graph_.size(); ++i)
    if (graph_[i] == y) out.push_back(i);
  return out;
}

bool operator==(const OverMap& a, const OverMap& b) {
  return same_set(a.source_, b.source_) && same_set(a.target_, b.target_) && a.graph_ == b.graph_;
}

OverMap compose(const OverMap& g, const OverMap& f) {
  if (!same_set(f.target(), g.source())) throw Error("compose: middle sets differ");
  std::vector<std::size_t> graph(f.source()->size());
  for (std::size_t i = 0; i < graph.size(); ++i) graph[i] = g(f(i));
  return OverMap(f.source(), g.target(), std::move(graph));
}

// ---------------------------------------------------------------------------

std::size_t FiberProduct::at(std::size_t x, std::size_t y) const {
  auto it = index.find({x, y});
  if (it == index.end()) throw Error("fiber product: pair is not in the apex");
  return it->second;
}

std::optional<std::size_t> FiberProduct::find(std::size_t x, std::size_t y) const {
  auto it = index.find({x, y});
  if (it == index.end()) return std::nullopt;
  return it->second;
}

FiberProduct fiber_product(const OverMap& f, const OverMap& g) {
  if (!same_set(f.target(), g.target())) throw Error("fiber_product: target mismatch");
  const SetRef& x = f.source();
  const SetRef& y = g.source();
  std::vector<std::string> labels;
  std::vector<std::size_t> anchor, pr1, pr2;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < x->size(); ++i)
    for (std::size_t j = 0; j < y->size(); ++j) {
      if (f(i) != g(j)) continue;
      index.emplace(std::make_pair(i, j), labels.size());
      labels.push_back("(" + x->label(i) + "," + y->label(j) + ")");
      anchor.push_back(x->anchor(i));
      pr1.push_back(i);
      pr2.push_back(j);
    }
  SetRef apex = make_set(x->base(), std::move(labels), std::move(anchor));
  return FiberProduct{apex, OverMap(apex, x, std::move(pr1)), OverMap(apex, y, std::move(pr2)),
                      std::move(index)};
}

FiberProduct product_over_base(const SetRef& x, const SetRef& y) {
  if (!same_base(x->base(), y->base())) throw Error("product over base: base mismatch");
  const SetRef s = base_set(x->base());
  return fiber_product(OverMap(x, s, x->anchors()), OverMap(y, s, y->anchors()));
}

OverMap map_product(const OverMap& f, const OverMap& g, const FiberProduct& source,
                    const FiberProduct& target) {
  std::vector<std::size_t> graph(source.apex->size());
  for (std::size_t k = 0; k < graph.size(); ++k)
    graph[k] = target.at(f(source.first(k)), g(source.second(k)));
  return OverMap(source.apex, target.apex, std::move(graph));
}

// ---------------------------------------------------------------------------

Span::Span(OverMap l, OverMap r) : left(std::move(l)), right(std::move(r)) {
  if (!same_set(left.source(), right.source())) throw Error("span: legs have different sources");
}

Span Span::identity(const SetRef& x) { return Span(OverMap::identity(x), OverMap::identity(x)); }

SpanComposite span_compose(const Span& c, const Span& d) {
  if (!same_set(c.to(), d.from())) throw Error("span_compose: boundary mismatch");
  FiberProduct apex = fiber_product(c.right, d.left);
  Span span(compose(c.left, apex.first), compose(d.right, apex.second));
  return SpanComposite{std::move(span), std::move(apex)};
}

SpanTensor span_tensor(const Span& c, const Span& c2) {
  if (!same_base(c.apex()->base(), c2.apex()->base())) throw Error("span_tensor: base mismatch");
  FiberProduct apex = product_over_base(c.apex(), c2.apex());
  FiberProduct from = product_over_base(c.from(), c2.from());
  FiberProduct to = product_over_base(c.to(), c2.to());
  Span span(map_product(c.left, c2.left, apex, from), map_product(c.right, c2.right, apex, to));
  return SpanTensor{std::move(span), std::move(apex), std::move(from), std::move(to)};
}

// ---------------------------------------------------------------------------

Verdict cell_check(const SpanCell& p) {
  if (!same_set(p.graph.source(), p.source.apex()) || !same_set(p.graph.target(), p.target.apex()))
    return Verdict::fail("graph does not map source apex to target apex");
  if (!same_set(p.source.from(), p.target.from()) || !same_set(p.source.to(), p.target.to()))
    return Verdict::fail("spans are not parallel");
  for (std::size_t i = 0; i < p.graph.graph().size(); ++i) {
    if (p.target.left(p.graph(i)) != p.source.left(i))
      return Verdict::fail("left leg fails at '" + p.source.apex()->label(i) + "'");
    if (p.target.right(p.graph(i)) != p.source.right(i))
      return Verdict::fail("right leg fails at '" + p.source.apex()->label(i) + "'");
  }
  return Verdict::pass();
}

SpanCell cell_vertical(const SpanCell& p, const SpanCell& q) {
  if (!(p.target == q.source)) throw Error("cell_vertical: cells are not composable");
  return SpanCell{p.source, q.target, compose(q.graph, p.graph)};
}

std::vector<std::size_t> Bijection::inverse() const {
  std::vector<std::size_t> inv(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) inv.at(image[i]) = i;
  return inv;
}

std::optional<Bijection> span_iso_search(const Span& a, const Span& b) {
  if (!same_set(a.from(), b.from()) || !same_set(a.to(), b.to())) return std::nullopt;
  if (a.apex()->size() != b.apex()->size()) return std::nullopt;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> pool;
  for (std::size_t j = 0; j < b.apex()->size(); ++j) pool[{b.left(j), b.right(j)}].push_back(j);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> used;
  Bijection bij;
  for (std::size_t i = 0; i < a.apex()->size(); ++i) {
    const std::pair key{a.left(i), a.right(i)};
    auto it = pool.find(key);
    std::size_t& k = used[key];
    if (it == pool.end() || k >= it->second.size()) return std::nullopt;
    bij.image.push_back(it->second[k++]);
  }
  return bij;
}

Verdict check_bijection(const Span& a, const Span& b, const Bijection& bij) {
  if (!same_set(a.from(), b.from()) || !same_set(a.to(), b.to()))
    return Verdict::fail("bijection: spans are not parallel");
  if (bij.image.size() != a.apex()->size() || a.apex()->size() != b.apex()->size())
    return Verdict::fail("bijection: size mismatch");
  std::vector<bool> hit(b.apex()->size(), false);
  for (std::size_t i = 0; i < bij.image.size(); ++i) {
    const std::size_t j = bij.image[i];
    if (j >= hit.size() || hit[j]) return Verdict::fail("bijection: not injective");
    hit[j] = true;
    if (b.left(j) != a.left(i)) return Verdict::fail("bijection: left leg fails at '" + a.apex()->label(i) + "'");
    if (b.right(j) != a.right(i)) return Verdict::fail("bijection: right leg fails at '" + a.apex()->label(i) + "'");
  }
  return Verdict::pass();
}

}  // namespace spantrace
