#include "spantrace/corrcat.hpp"

#include <set>
#include <sstream>

namespace spantrace {

namespace {

bool same_complex(const ComplexRef& a, const ComplexRef& b) { return a == b || *a == *b; }

ChainMap rebind(const ChainMap& m, const ComplexRef& source, const ComplexRef& target) {
  if (m.source_ref() == source && m.target_ref() == target) return m;
  return ChainMap(source, target, m.components());
}

/// Position of each source element inside its fiber, and the fibers.
struct FiberIndex {
  std::vector<std::vector<std::size_t>> fibers;
  std::vector<std::size_t> position;

  explicit FiberIndex(const OverMap& f) : fibers(f.target()->size()), position(f.source()->size()) {
    for (std::size_t x = 0; x < f.source()->size(); ++x) {
      position[x] = fibers[f(x)].size();
      fibers[f(x)].push_back(x);
    }
  }
};

/// Offset of stalk `member` of a fiber sum in degree n.
std::size_t sum_offset(const Sheaf& l, const std::vector<std::size_t>& fiber, std::size_t position, Degree n) {
  std::size_t off = 0;
  for (std::size_t k = 0; k < position; ++k) off += l.stalk(fiber[k])->rank(n);
  return off;
}

std::string matrix_text(const Matrix& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

std::vector<ComplexRef> fiber_parts(const Sheaf& l, const std::vector<std::size_t>& fiber) {
  std::vector<ComplexRef> parts;
  for (auto x : fiber) parts.push_back(l.stalk(x));
  return parts;
}

}  // namespace

ChainMap identity_between(const ComplexRef& source, const ComplexRef& target) {
  return ChainMap(source, target, ChainMap::identity(source).components());
}

CCObject CCObject::unit(Ring ring, const BaseRef& base) { return CCObject{Sheaf::unit(ring, base)}; }

// ---------------------------------------------------------------------------

CCMorphism::CCMorphism(CCObject source, CCObject target, Span corr, std::vector<ChainMap> maps)
    : CCMorphism(std::move(source), std::move(target), std::move(corr), std::move(maps), true) {}

CCMorphism CCMorphism::assemble(CCObject source, CCObject target, Span corr, std::vector<ChainMap> maps) {
  return CCMorphism(std::move(source), std::move(target), std::move(corr), std::move(maps), false);
}

CCMorphism::CCMorphism(CCObject source, CCObject target, Span corr, std::vector<ChainMap> maps, bool checked)
    : source_(std::move(source)), target_(std::move(target)), corr_(std::move(corr)), maps_(std::move(maps)) {
  if (source_.ring() != target_.ring()) throw Error("correspondence: ring mismatch");
  if (!same_set(corr_.from(), source_.space())) throw Error("correspondence: span does not start at the source");
  if (!same_set(corr_.to(), target_.space())) throw Error("correspondence: span does not end at the target");
  if (maps_.size() != corr_.apex()->size()) throw Error("correspondence: one component per apex element required");
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const ComplexRef& l = source_.sheaf.stalk(corr_.left(i));
    const ComplexRef& m = target_.sheaf.stalk(corr_.right(i));
    if (checked) {
      if (!same_complex(maps_[i].source_ref(), l))
        throw Error("correspondence: component at '" + corr_.apex()->label(i) + "' has the wrong source");
      if (!same_complex(maps_[i].target_ref(), m))
        throw Error("correspondence: component at '" + corr_.apex()->label(i) + "' has the wrong target");
    }
    maps_[i] = rebind(maps_[i], l, m);
  }
}

CCMorphism CCMorphism::identity(const CCObject& a) {
  std::vector<ChainMap> maps;
  for (auto& s : a.sheaf.stalks()) maps.push_back(ChainMap::identity(s));
  return assemble(a, a, Span::identity(a.space()), std::move(maps));
}

bool operator==(const CCMorphism& a, const CCMorphism& b) {
  if (!(a.source_ == b.source_ && a.target_ == b.target_ && a.corr_ == b.corr_)) return false;
  for (std::size_t i = 0; i < a.maps_.size(); ++i)
    if (a.maps_[i].components() != b.maps_[i].components()) return false;
  return true;
}

Verdict cc_validate(const CCMorphism& m) {
  if (Verdict v = sheaf_validate(m.source().sheaf); !v) return Verdict::fail("source " + v.detail);
  if (Verdict v = sheaf_validate(m.target().sheaf); !v) return Verdict::fail("target " + v.detail);
  for (std::size_t i = 0; i < m.maps().size(); ++i) {
    Verdict v = chain_map_check(m.map(i));
    if (!v) return Verdict::fail("component '" + m.corr().apex()->label(i) + "': " + v.detail);
  }
  return Verdict::pass();
}

CCComposite cc_compose(const CCMorphism& first, const CCMorphism& second) {
  if (!(first.target() == second.source())) throw Error("cc_compose: middle objects differ");
  SpanComposite sc = span_compose(first.corr(), second.corr());
  std::vector<ChainMap> maps;
  maps.reserve(sc.apex.apex->size());
  for (std::size_t k = 0; k < sc.apex.apex->size(); ++k) {
    const ChainMap& u = first.map(sc.apex.first(k));
    const ChainMap& v = second.map(sc.apex.second(k));
    maps.push_back(map_compose(v, rebind(u, u.source_ref(), v.source_ref())));
  }
  CCMorphism m = CCMorphism::assemble(first.source(), second.target(), sc.span, std::move(maps));
  return CCComposite{std::move(m), std::move(sc.apex)};
}

CCTensorObject cc_tensor_object(const CCObject& a, const CCObject& b) {
  if (a.ring() != b.ring()) throw Error("cc_tensor: ring mismatch");
  FiberProduct fp = product_over_base(a.space(), b.space());
  Sheaf s = box(a.sheaf, b.sheaf, fp);
  return CCTensorObject{CCObject{std::move(s)}, std::move(fp)};
}

CCTensor cc_tensor(const CCMorphism& a, const CCMorphism& b) {
  if (a.ring() != b.ring()) throw Error("cc_tensor: ring mismatch");
  SpanTensor st = span_tensor(a.corr(), b.corr());
  CCObject src{box(a.source().sheaf, b.source().sheaf, st.from)};
  CCObject tgt{box(a.target().sheaf, b.target().sheaf, st.to)};
  std::vector<ChainMap> maps;
  for (std::size_t k = 0; k < st.apex.apex->size(); ++k)
    maps.push_back(map_tensor(a.map(st.apex.first(k)), b.map(st.apex.second(k))));
  CCMorphism m = CCMorphism::assemble(std::move(src), std::move(tgt), st.span, std::move(maps));
  return CCTensor{std::move(m), std::move(st.apex), std::move(st.from), std::move(st.to)};
}

// ---------------------------------------------------------------------------

namespace {

/// Morphism over the span (id, r) or (r, id) with identity components.
CCMorphism structural(const CCObject& source, const CCObject& target, const OverMap& leg, bool leg_on_right) {
  const SetRef& apex = leg.source();
  std::vector<ChainMap> maps;
  for (std::size_t k = 0; k < apex->size(); ++k) {
    const std::size_t other = leg(k);
    const ComplexRef& s = leg_on_right ? source.sheaf.stalk(k) : source.sheaf.stalk(other);
    const ComplexRef& t = leg_on_right ? target.sheaf.stalk(other) : target.sheaf.stalk(k);
    if (!same_complex(s, t)) throw Error("structural morphism: stalks differ");
    maps.push_back(identity_between(s, t));
  }
  Span span = leg_on_right ? Span(OverMap::identity(apex), leg) : Span(leg, OverMap::identity(apex));
  return CCMorphism::assemble(source, target, std::move(span), std::move(maps));
}

}  // namespace

CCMorphism cc_left_unitor(const CCObject& a) {
  auto ua = cc_tensor_object(CCObject::unit(a.ring(), a.base()), a);
  return structural(ua.object, a, ua.space.second, true);
}

CCMorphism cc_left_unitor_inverse(const CCObject& a) {
  auto ua = cc_tensor_object(CCObject::unit(a.ring(), a.base()), a);
  return structural(a, ua.object, ua.space.second, false);
}

CCMorphism cc_right_unitor(const CCObject& a) {
  auto au = cc_tensor_object(a, CCObject::unit(a.ring(), a.base()));
  return structural(au.object, a, au.space.first, true);
}

CCMorphism cc_right_unitor_inverse(const CCObject& a) {
  auto au = cc_tensor_object(a, CCObject::unit(a.ring(), a.base()));
  return structural(a, au.object, au.space.first, false);
}

namespace {

struct AssocData {
  CCTensorObject ab, ab_c, bc, a_bc;
  std::vector<std::size_t> forward;  // (ab)c element -> a(bc) element
};

AssocData assoc_data(const CCObject& a, const CCObject& b, const CCObject& c) {
  auto ab = cc_tensor_object(a, b);
  auto ab_c = cc_tensor_object(ab.object, c);
  auto bc = cc_tensor_object(b, c);
  auto a_bc = cc_tensor_object(a, bc.object);
  std::vector<std::size_t> fwd(ab_c.space.apex->size());
  for (std::size_t k = 0; k < fwd.size(); ++k) {
    const std::size_t e = ab_c.space.first(k);
    const std::size_t z = ab_c.space.second(k);
    fwd[k] = a_bc.space.at(ab.space.first(e), bc.space.at(ab.space.second(e), z));
  }
  return AssocData{std::move(ab), std::move(ab_c), std::move(bc), std::move(a_bc), std::move(fwd)};
}

}  // namespace

CCMorphism cc_associator(const CCObject& a, const CCObject& b, const CCObject& c) {
  auto d = assoc_data(a, b, c);
  const SetRef& apex = d.ab_c.space.apex;
  std::vector<ChainMap> maps;
  for (std::size_t k = 0; k < apex->size(); ++k) {
    const std::size_t e = d.ab_c.space.first(k);
    maps.push_back(tensor_associator(a.sheaf.stalk(d.ab.space.first(e)), b.sheaf.stalk(d.ab.space.second(e)),
                                     c.sheaf.stalk(d.ab_c.space.second(k))));
  }
  Span span(OverMap::identity(apex), OverMap(apex, d.a_bc.space.apex, d.forward));
  return CCMorphism::assemble(d.ab_c.object, d.a_bc.object, std::move(span), std::move(maps));
}

CCMorphism cc_associator_inverse(const CCObject& a, const CCObject& b, const CCObject& c) {
  auto d = assoc_data(a, b, c);
  const SetRef& apex = d.a_bc.space.apex;
  std::vector<std::size_t> back(apex->size());
  for (std::size_t k = 0; k < d.forward.size(); ++k) back[d.forward[k]] = k;
  std::vector<ChainMap> maps;
  for (std::size_t j = 0; j < apex->size(); ++j) {
    const std::size_t k = back[j];
    const std::size_t e = d.ab_c.space.first(k);
    maps.push_back(permutation_inverse(tensor_associator(a.sheaf.stalk(d.ab.space.first(e)),
                                                         b.sheaf.stalk(d.ab.space.second(e)),
                                                         c.sheaf.stalk(d.ab_c.space.second(k)))));
  }
  Span span(OverMap::identity(apex), OverMap(apex, d.ab_c.space.apex, back));
  return CCMorphism::assemble(d.a_bc.object, d.ab_c.object, std::move(span), std::move(maps));
}

CCMorphism cc_symmetry(const CCObject& a, const CCObject& b) {
  auto ab = cc_tensor_object(a, b);
  auto ba = cc_tensor_object(b, a);
  const SetRef& apex = ab.space.apex;
  std::vector<std::size_t> swap(apex->size());
  std::vector<ChainMap> maps;
  for (std::size_t k = 0; k < apex->size(); ++k) {
    swap[k] = ba.space.at(ab.space.second(k), ab.space.first(k));
    maps.push_back(koszul_swap(a.sheaf.stalk(ab.space.first(k)), b.sheaf.stalk(ab.space.second(k))));
  }
  Span span(OverMap::identity(apex), OverMap(apex, ba.space.apex, std::move(swap)));
  return CCMorphism::assemble(ab.object, ba.object, std::move(span), std::move(maps));
}

// ---------------------------------------------------------------------------

Verdict cc_cell_check(const CCCell& q) {
  if (!(q.source.source() == q.target.source()) || !(q.source.target() == q.target.target()))
    return Verdict::fail("cell between non-parallel morphisms");
  if (Verdict v = cell_check(SpanCell{q.source.corr(), q.target.corr(), q.graph}); !v) return v;
  const Ring ring = q.source.ring();
  std::vector<std::map<Degree, Matrix>> sums(q.target.maps().size());
  for (std::size_t g = 0; g < q.source.maps().size(); ++g) {
    auto& acc = sums[q.graph(g)];
    for (auto& [n, m] : q.source.map(g).components()) {
      auto it = acc.find(n);
      if (it == acc.end())
        acc.emplace(n, m);
      else
        it->second = mat_add(it->second, m);
    }
  }
  for (std::size_t d = 0; d < sums.size(); ++d) {
    const ChainMap& v = q.target.map(d);
    std::set<Degree> degs;
    for (auto& [n, m] : v.components()) degs.insert(n);
    for (auto& [n, m] : sums[d]) degs.insert(n);
    for (Degree n : degs) {
      Matrix expected = v.component(n);
      auto it = sums[d].find(n);
      Matrix got = it == sums[d].end() ? Matrix(ring, expected.rows(), expected.cols()) : it->second;
      if (!(expected == got))
        return Verdict::fail("cell fails at '" + q.target.corr().apex()->label(d) + "' degree " + std::to_string(n) +
                             ": target component " + matrix_text(expected) + ", block sum " + matrix_text(got));
    }
  }
  return Verdict::pass();
}

CCCell cc_identity_cell(const CCMorphism& m) { return CCCell{m, m, OverMap::identity(m.corr().apex())}; }

CCCell cc_cell_vertical(const CCCell& p, const CCCell& q) {
  return CCCell{p.source, q.target, compose(q.graph, p.graph)};
}

CCCell cc_whisker_first(const CCCell& p, const CCMorphism& b) {
  CCComposite src = cc_compose(p.source, b);
  CCComposite tgt = cc_compose(p.target, b);
  std::vector<std::size_t> graph(src.apex.apex->size());
  for (std::size_t k = 0; k < graph.size(); ++k)
    graph[k] = tgt.apex.at(p.graph(src.apex.first(k)), src.apex.second(k));
  OverMap g(src.apex.apex, tgt.apex.apex, std::move(graph));
  return CCCell{std::move(src.morphism), std::move(tgt.morphism), std::move(g)};
}

CCCell cc_whisker_second(const CCMorphism& a, const CCCell& p) {
  CCComposite src = cc_compose(a, p.source);
  CCComposite tgt = cc_compose(a, p.target);
  std::vector<std::size_t> graph(src.apex.apex->size());
  for (std::size_t k = 0; k < graph.size(); ++k)
    graph[k] = tgt.apex.at(src.apex.first(k), p.graph(src.apex.second(k)));
  OverMap g(src.apex.apex, tgt.apex.apex, std::move(graph));
  return CCCell{std::move(src.morphism), std::move(tgt.morphism), std::move(g)};
}

namespace {

struct AssocCells {
  CCComposite left;   // (a then b) then c
  CCComposite right;  // a then (b then c)
  std::vector<std::size_t> forward;
};

AssocCells assoc_cells(const CCMorphism& a, const CCMorphism& b, const CCMorphism& c) {
  CCComposite ab = cc_compose(a, b);
  CCComposite ab_c = cc_compose(ab.morphism, c);
  CCComposite bc = cc_compose(b, c);
  CCComposite a_bc = cc_compose(a, bc.morphism);
  std::vector<std::size_t> fwd(ab_c.apex.apex->size());
  for (std::size_t k = 0; k < fwd.size(); ++k) {
    const std::size_t e = ab_c.apex.first(k);
    fwd[k] = a_bc.apex.at(ab.apex.first(e), bc.apex.at(ab.apex.second(e), ab_c.apex.second(k)));
  }
  return AssocCells{std::move(ab_c), std::move(a_bc), std::move(fwd)};
}

}  // namespace

CCCell cc_assoc_cell(const CCMorphism& a, const CCMorphism& b, const CCMorphism& c) {
  auto d = assoc_cells(a, b, c);
  OverMap g(d.left.apex.apex, d.right.apex.apex, d.forward);
  return CCCell{std::move(d.left.morphism), std::move(d.right.morphism), std::move(g)};
}

CCCell cc_assoc_cell_inverse(const CCMorphism& a, const CCMorphism& b, const CCMorphism& c) {
  auto d = assoc_cells(a, b, c);
  OverMap g(d.right.apex.apex, d.left.apex.apex, Bijection{d.forward}.inverse());
  return CCCell{std::move(d.right.morphism), std::move(d.left.morphism), std::move(g)};
}

CCCell cc_left_unit_cell(const CCMorphism& a) {
  CCComposite c = cc_compose(CCMorphism::identity(a.source()), a);
  OverMap g = c.apex.second;
  return CCCell{std::move(c.morphism), a, std::move(g)};
}

CCCell cc_right_unit_cell(const CCMorphism& a) {
  CCComposite c = cc_compose(a, CCMorphism::identity(a.target()));
  OverMap g = c.apex.first;
  return CCCell{std::move(c.morphism), a, std::move(g)};
}

CCCell cc_left_unit_cell_inverse(const CCMorphism& a) {
  CCComposite c = cc_compose(CCMorphism::identity(a.source()), a);
  std::vector<std::size_t> graph(a.corr().apex()->size());
  for (std::size_t k = 0; k < graph.size(); ++k) graph[k] = c.apex.at(a.corr().left(k), k);
  OverMap g(a.corr().apex(), c.apex.apex, std::move(graph));
  return CCCell{a, std::move(c.morphism), std::move(g)};
}

CCCell cc_right_unit_cell_inverse(const CCMorphism& a) {
  CCComposite c = cc_compose(a, CCMorphism::identity(a.target()));
  std::vector<std::size_t> graph(a.corr().apex()->size());
  for (std::size_t k = 0; k < graph.size(); ++k) graph[k] = c.apex.at(k, a.corr().right(k));
  OverMap g(a.corr().apex(), c.apex.apex, std::move(graph));
  return CCCell{a, std::move(c.morphism), std::move(g)};
}

std::optional<CCCell> cc_iso_search(const CCMorphism& a, const CCMorphism& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target())) return std::nullopt;
  const std::size_t n = a.corr().apex()->size();
  if (n != b.corr().apex()->size()) return std::nullopt;
  std::vector<bool> used(n, false);
  std::vector<std::size_t> image(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::size_t j = 0; j < n && !found; ++j) {
      if (used[j] || a.corr().left(i) != b.corr().left(j) || a.corr().right(i) != b.corr().right(j)) continue;
      if (a.map(i).components() != b.map(j).components()) continue;
      used[j] = true;
      image[i] = j;
      found = true;
    }
    if (!found) return std::nullopt;
  }
  return CCCell{a, b, OverMap(a.corr().apex(), b.corr().apex(), std::move(image))};
}

bool cc_cell_invertible(const CCCell& q) {
  const auto& g = q.graph.graph();
  if (g.size() != q.graph.target()->size()) return false;
  std::vector<bool> hit(g.size(), false);
  for (auto j : g) {
    if (hit[j]) return false;
    hit[j] = true;
  }
  return true;
}

// ---------------------------------------------------------------------------

CCMorphism f_natural(const OverMap& f, const Sheaf& l) {
  if (!same_set(f.source(), l.carrier())) throw Error("f_natural: carrier mismatch");
  const Sheaf pushed = push(f, l);
  const FiberIndex fi(f);
  std::vector<ChainMap> maps;
  for (std::size_t x = 0; x < l.stalks().size(); ++x) {
    const auto& fib = fi.fibers[f(x)];
    const ComplexRef& sum = pushed.stalk(f(x));
    maps.push_back(fib.size() == 1 ? identity_between(l.stalk(x), sum)
                                   : sum_inclusion(fiber_parts(l, fib), fi.position[x], sum));
  }
  const CCObject src{l};
  const CCObject tgt{pushed};
  return CCMorphism::assemble(src, tgt, Span(OverMap::identity(f.source()), f), std::move(maps));
}

CCMorphism f_conatural(const OverMap& f, const Sheaf& l) {
  if (!same_set(f.source(), l.carrier())) throw Error("f_conatural: carrier mismatch");
  const Sheaf pushed = push(f, l);
  const FiberIndex fi(f);
  std::vector<ChainMap> maps;
  for (std::size_t x = 0; x < l.stalks().size(); ++x) {
    const auto& fib = fi.fibers[f(x)];
    const ComplexRef& sum = pushed.stalk(f(x));
    maps.push_back(fib.size() == 1 ? identity_between(sum, l.stalk(x))
                                   : sum_projection(fiber_parts(l, fib), fi.position[x], sum));
  }
  return CCMorphism::assemble(CCObject{pushed}, CCObject{l}, Span(f, OverMap::identity(f.source())),
                              std::move(maps));
}

CCCell adjunction_unit(const OverMap& f, const Sheaf& l) {
  CCComposite c = cc_compose(f_natural(f, l), f_conatural(f, l));
  std::vector<std::size_t> graph(f.source()->size());
  for (std::size_t x = 0; x < graph.size(); ++x) graph[x] = c.apex.at(x, x);
  OverMap g(f.source(), c.apex.apex, std::move(graph));
  return CCCell{CCMorphism::identity(CCObject{l}), std::move(c.morphism), std::move(g)};
}

CCCell adjunction_counit(const OverMap& f, const Sheaf& l) {
  CCComposite c = cc_compose(f_conatural(f, l), f_natural(f, l));
  std::vector<std::size_t> graph(c.apex.apex->size());
  for (std::size_t k = 0; k < graph.size(); ++k) graph[k] = f(c.apex.first(k));
  OverMap g(c.apex.apex, f.target(), std::move(graph));
  return CCCell{std::move(c.morphism), CCMorphism::identity(CCObject{push(f, l)}), std::move(g)};
}

namespace {

Verdict paste(const std::vector<CCCell>& cells, const char* which, const SetRef& apex) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (Verdict v = cc_cell_check(cells[i]); !v)
      return Verdict::fail(std::string(which) + " step " + std::to_string(i) + ": " + v.detail);
  CCCell total = cells.front();
  for (std::size_t i = 1; i < cells.size(); ++i) total = cc_cell_vertical(total, cells[i]);
  if (Verdict v = cc_cell_check(total); !v) return Verdict::fail(std::string(which) + " composite: " + v.detail);
  if (!(total.graph == OverMap::identity(apex))) return Verdict::fail(std::string(which) + " is not the identity");
  return Verdict::pass();
}

}  // namespace

Verdict adjunction_triangles(const OverMap& f, const Sheaf& l) {
  const CCMorphism lower = f_natural(f, l);
  const CCMorphism upper = f_conatural(f, l);
  const CCCell eta = adjunction_unit(f, l);
  const CCCell eps = adjunction_counit(f, l);

  // f_nat -> (id then f_nat) -> ((f_nat then f^nat) then f_nat)
  //       -> (f_nat then (f^nat then f_nat)) -> (f_nat then id) -> f_nat
  Verdict first = paste({cc_left_unit_cell_inverse(lower), cc_whisker_first(eta, lower),
                         cc_assoc_cell(lower, upper, lower), cc_whisker_second(lower, eps),
                         cc_right_unit_cell(lower)},
                        "first triangle", lower.corr().apex());
  if (!first) return first;
  return paste({cc_right_unit_cell_inverse(upper), cc_whisker_second(upper, eta),
                cc_assoc_cell_inverse(upper, lower, upper), cc_whisker_first(eps, upper),
                cc_left_unit_cell(upper)},
               "second triangle", upper.corr().apex());
}

// ---------------------------------------------------------------------------

Verdict diagram_check(const PushDiagram& d) {
  if (!same_set(d.f.source(), d.c.from()) || !same_set(d.g.source(), d.c.to()) ||
      !same_set(d.p.source(), d.c.apex()))
    return Verdict::fail("diagram: upper span does not match f, p, g");
  if (!same_set(d.f.target(), d.lower.from()) || !same_set(d.g.target(), d.lower.to()) ||
      !same_set(d.p.target(), d.lower.apex()))
    return Verdict::fail("diagram: lower span does not match f, p, g");
  for (std::size_t k = 0; k < d.c.apex()->size(); ++k) {
    if (d.f(d.c.left(k)) != d.lower.left(d.p(k)))
      return Verdict::fail("diagram: left square does not commute at '" + d.c.apex()->label(k) + "'");
    if (d.g(d.c.right(k)) != d.lower.right(d.p(k)))
      return Verdict::fail("diagram: right square does not commute at '" + d.c.apex()->label(k) + "'");
  }
  return Verdict::pass();
}

CCMorphism shriek_push(const PushDiagram& d, const CCMorphism& u) {
  if (Verdict v = diagram_check(d); !v) throw Error("shriek_push: " + v.detail);
  if (!(u.corr() == d.c)) throw Error("shriek_push: morphism is not over the upper span");
  const Sheaf& l = u.source().sheaf;
  const Sheaf& m = u.target().sheaf;
  const Sheaf lp = push(d.f, l);
  const Sheaf mp = push(d.g, m);
  const FiberIndex fx(d.f), gy(d.g), pc(d.p);
  const Ring ring = u.ring();

  std::vector<ChainMap> maps;
  for (std::size_t k = 0; k < d.lower.apex()->size(); ++k) {
    const std::size_t xp = d.lower.left(k), yp = d.lower.right(k);
    const ComplexRef& src = lp.stalk(xp);
    const ComplexRef& tgt = mp.stalk(yp);
    std::map<Degree, Matrix::Builder> parts;
    for (std::size_t g : pc.fibers[k]) {
      const std::size_t x = d.c.left(g), y = d.c.right(g);
      for (auto& [n, block] : u.map(g).components()) {
        auto it = parts.find(n);
        if (it == parts.end()) it = parts.emplace(n, Matrix::Builder(ring, tgt->rank(n), src->rank(n))).first;
        it->second.add_block(sum_offset(m, gy.fibers[yp], gy.position[y], n),
                             sum_offset(l, fx.fibers[xp], fx.position[x], n), block);
      }
    }
    std::map<Degree, Matrix> comps;
    for (auto& [n, b] : parts) comps.emplace(n, b.build());
    maps.emplace_back(src, tgt, std::move(comps));
  }
  return CCMorphism::assemble(CCObject{lp}, CCObject{mp}, d.lower, std::move(maps));
}

CCCell shriek_push_cell(const PushDiagram& d, const CCMorphism& u, const CCMorphism& pushed) {
  CCComposite src = cc_compose(u, f_natural(d.g, u.target().sheaf));
  CCComposite tgt = cc_compose(f_natural(d.f, u.source().sheaf), pushed);
  std::vector<std::size_t> graph(src.apex.apex->size());
  for (std::size_t k = 0; k < graph.size(); ++k) {
    const std::size_t g = src.apex.first(k);
    graph[k] = tgt.apex.at(d.c.left(g), d.p(g));
  }
  OverMap map(src.apex.apex, tgt.apex.apex, std::move(graph));
  return CCCell{std::move(src.morphism), std::move(tgt.morphism), std::move(map)};
}

std::optional<LiftSearch> shriek_push_exhaustive(const PushDiagram& d, const CCMorphism& u, std::size_t max_free) {
  const Ring ring = u.ring();
  if (ring.is_integers()) return std::nullopt;
  const CCMorphism pushed = shriek_push(d, u);
  const CCObject& src = pushed.source();
  const CCObject& tgt = pushed.target();

  struct Slot {
    std::size_t apex;
    Degree n;
    std::size_t rows, cols;
  };
  std::vector<Slot> slots;
  LiftSearch out;
  for (std::size_t k = 0; k < d.lower.apex()->size(); ++k) {
    const Complex& a = *src.sheaf.stalk(d.lower.left(k));
    const Complex& b = *tgt.sheaf.stalk(d.lower.right(k));
    for (auto [n, r] : a.ranks())
      if (b.rank(n) > 0) {
        slots.push_back({k, n, b.rank(n), r});
        out.free_entries += b.rank(n) * r;
      }
  }
  if (out.free_entries > max_free) return std::nullopt;

  const CCComposite fixed = cc_compose(u, f_natural(d.g, u.target().sheaf));
  const CCMorphism lower_nat = f_natural(d.f, u.source().sheaf);
  const auto m = static_cast<std::size_t>(ring.modulus());
  std::vector<Scalar> digits(out.free_entries, 0);
  out.only_push = true;
  for (;;) {
    std::vector<std::map<Degree, Matrix>> comps(d.lower.apex()->size());
    std::size_t pos = 0;
    for (auto& s : slots) {
      Matrix mat(ring, s.rows, s.cols);
      for (std::size_t r = 0; r < s.rows; ++r)
        for (std::size_t c = 0; c < s.cols; ++c) mat.set(r, c, digits[pos++]);
      comps[s.apex].emplace(s.n, std::move(mat));
    }
    std::vector<ChainMap> maps;
    for (std::size_t k = 0; k < comps.size(); ++k)
      maps.emplace_back(src.sheaf.stalk(d.lower.left(k)), tgt.sheaf.stalk(d.lower.right(k)), std::move(comps[k]));
    const CCMorphism cand = CCMorphism::assemble(src, tgt, d.lower, std::move(maps));
    CCComposite other = cc_compose(lower_nat, cand);
    std::vector<std::size_t> graph(fixed.apex.apex->size());
    for (std::size_t k = 0; k < graph.size(); ++k) {
      const std::size_t g = fixed.apex.first(k);
      graph[k] = other.apex.at(d.c.left(g), d.p(g));
    }
    const CCCell cell{fixed.morphism, other.morphism, OverMap(fixed.apex.apex, other.apex.apex, std::move(graph))};
    ++out.candidates;
    if (cc_cell_check(cell)) {
      ++out.passing;
      if (cand == pushed)
        out.push_passes = true;
      else
        out.only_push = false;
    }
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == static_cast<Scalar>(m)) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  out.only_push = out.only_push && out.push_passes && out.passing == 1;
  return out;
}

// ---------------------------------------------------------------------------

InternalHom internal_hom(const CCObject& a, const CCObject& b) {
  if (a.ring() != b.ring()) throw Error("internal_hom: ring mismatch");
  FiberProduct fp = product_over_base(a.space(), b.space());
  Sheaf s = box(verdier(a.sheaf), b.sheaf, fp);
  return InternalHom{CCObject{std::move(s)}, std::move(fp)};
}

CCMorphism cc_curry(const CCMorphism& u, const CCObject& t, const CCObject& a) {
  const CCTensorObject ta = cc_tensor_object(t, a);
  if (!(u.source() == ta.object)) throw Error("cc_curry: source is not T (x) A");
  const InternalHom hom = internal_hom(a, u.target());
  const SetRef& apex = u.corr().apex();
  std::vector<std::size_t> left(apex->size()), right(apex->size());
  std::vector<ChainMap> maps;
  for (std::size_t g = 0; g < apex->size(); ++g) {
    const std::size_t k = u.corr().left(g);
    const std::size_t tt = ta.space.first(k), x = ta.space.second(k);
    left[g] = tt;
    right[g] = hom.space.at(x, u.corr().right(g));
    maps.push_back(curry(u.map(g), t.sheaf.stalk(tt), a.sheaf.stalk(x)));
  }
  Span span(OverMap(apex, t.space(), std::move(left)), OverMap(apex, hom.space.apex, std::move(right)));
  return CCMorphism::assemble(t, hom.object, std::move(span), std::move(maps));
}

CCMorphism cc_uncurry(const CCMorphism& w, const CCObject& t, const CCObject& a, const CCObject& b) {
  const InternalHom hom = internal_hom(a, b);
  if (!(w.target() == hom.object)) throw Error("cc_uncurry: target is not Hom(A, B)");
  if (!(w.source() == t)) throw Error("cc_uncurry: source is not T");
  const CCTensorObject ta = cc_tensor_object(t, a);
  const SetRef& apex = w.corr().apex();
  std::vector<std::size_t> left(apex->size()), right(apex->size());
  std::vector<ChainMap> maps;
  for (std::size_t g = 0; g < apex->size(); ++g) {
    const std::size_t tt = w.corr().left(g), h = w.corr().right(g);
    const std::size_t x = hom.space.first(h), y = hom.space.second(h);
    left[g] = ta.space.at(tt, x);
    right[g] = y;
    maps.push_back(uncurry(w.map(g), t.sheaf.stalk(tt), a.sheaf.stalk(x), b.sheaf.stalk(y)));
  }
  Span span(OverMap(apex, ta.space.apex, std::move(left)), OverMap(apex, b.space(), std::move(right)));
  return CCMorphism::assemble(ta.object, b, std::move(span), std::move(maps));
}

}  // namespace spantrace
