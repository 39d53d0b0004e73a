#include "spantrace/basefunc.hpp"

namespace spantrace {

namespace {

void require_over_target(const BaseChange& bc, const SetRef& y, const char* what) {
  if (!same_base(y->base(), bc.target_base()))
    throw Error(std::string(what) + ": anchor mismatch (set is not over the target base)");
}

/// Morphism over (id, leg) or (leg, id) of a set map; identity components.
CCMorphism graph_morphism(const CCObject& a, const CCObject& b, const OverMap& leg) {
  Span span(OverMap::identity(a.space()), leg);
  std::vector<ChainMap> maps;
  for (std::size_t i = 0; i < a.space()->size(); ++i)
    maps.push_back(identity_between(a.sheaf.stalk(i), b.sheaf.stalk(leg(i))));
  return CCMorphism::assemble(a, b, std::move(span), std::move(maps));
}

Verdict same_up_to_cell(const CCMorphism& a, const CCMorphism& b, const std::string& what) {
  auto cell = cc_iso_search(a, b);
  if (!cell) return Verdict::fail(what + ": no invertible cell");
  if (Verdict v = cc_cell_check(*cell); !v) return Verdict::fail(what + ": " + v.detail);
  return Verdict::pass();
}

Verdict compare_classes(const OmegaClass& a, const OmegaClass& b, const std::vector<std::size_t>& image,
                        const std::string& what) {
  if (image.size() != a.values.size() || a.values.size() != b.values.size())
    return Verdict::fail(what + ": carriers have different sizes");
  for (std::size_t k = 0; k < image.size(); ++k)
    if (a.values[k] != b.values[image[k]])
      return Verdict::fail(what + " differs at '" + a.carrier->label(k) + "': " + std::to_string(a.values[k]) +
                           " vs " + std::to_string(b.values[image[k]]));
  return Verdict::pass();
}

}  // namespace

BaseChange::BaseChange(OverMap g) : g_(std::move(g)) {
  const BaseRef& t = g_.target()->base();
  if (!same_set(g_.target(), base_set(t))) throw Error("base change: target is not the base set");
  base_ = make_base(g_.source()->labels());
}

BaseChange::PulledSet BaseChange::pull_set(const SetRef& y) const {
  require_over_target(*this, y, "pull");
  FiberProduct over = product_over_base(y, g_.source());
  std::vector<std::size_t> anchor;
  for (std::size_t k = 0; k < over.apex->size(); ++k) anchor.push_back(over.second(k));
  SetRef set = make_set(base_, over.apex->labels(), std::move(anchor));
  return PulledSet{std::move(set), std::move(over)};
}

OverMap pull_map(const BaseChange& bc, const OverMap& f) {
  const auto src = bc.pull_set(f.source());
  const auto tgt = bc.pull_set(f.target());
  std::vector<std::size_t> graph;
  for (std::size_t k = 0; k < src.set->size(); ++k) graph.push_back(tgt.at(f(src.over.first(k)), src.over.second(k)));
  return OverMap(src.set, tgt.set, std::move(graph));
}

Span pull_span(const BaseChange& bc, const Span& c) { return Span(pull_map(bc, c.left), pull_map(bc, c.right)); }

CCObject pull_object(const BaseChange& bc, const CCObject& a) {
  const auto y = bc.pull_set(a.space());
  std::vector<ComplexRef> stalks;
  for (std::size_t k = 0; k < y.set->size(); ++k) stalks.push_back(a.sheaf.stalk(y.over.first(k)));
  return CCObject{Sheaf(a.ring(), y.set, std::move(stalks))};
}

CCMorphism pull_morphism(const BaseChange& bc, const CCMorphism& m) {
  const auto apex = bc.pull_set(m.corr().apex());
  std::vector<ChainMap> maps;
  for (std::size_t k = 0; k < apex.set->size(); ++k) maps.push_back(m.map(apex.over.first(k)));
  return CCMorphism::assemble(pull_object(bc, m.source()), pull_object(bc, m.target()), pull_span(bc, m.corr()),
                              std::move(maps));
}

OmegaClass pull_class(const BaseChange& bc, const OmegaClass& a) {
  const auto x = bc.pull_set(a.carrier);
  std::vector<Scalar> values;
  for (std::size_t k = 0; k < x.set->size(); ++k) values.push_back(a.values[x.over.first(k)]);
  return OmegaClass{a.ring, x.set, std::move(values)};
}

PushDiagram pull_diagram(const BaseChange& bc, const PushDiagram& d) {
  return PushDiagram{pull_map(bc, d.f), pull_map(bc, d.p), pull_map(bc, d.g), pull_span(bc, d.c),
                     pull_span(bc, d.lower)};
}

CCMorphism recoord_morphism(const CCObject& a, const CCObject& b, const std::vector<std::size_t>& image) {
  return graph_morphism(a, b, OverMap(a.space(), b.space(), image));
}

CCMorphism tensor_constraint(const BaseChange& bc, const CCObject& a, const CCObject& b) {
  const auto ab = cc_tensor_object(a, b);
  const CCObject src = pull_object(bc, ab.object);
  const auto over = bc.pull_set(ab.object.space());
  const auto xs = bc.pull_set(a.space());
  const auto ys = bc.pull_set(b.space());
  const auto prod = cc_tensor_object(pull_object(bc, a), pull_object(bc, b));
  std::vector<std::size_t> image;
  for (std::size_t k = 0; k < src.space()->size(); ++k) {
    const std::size_t xy = over.over.first(k), s = over.over.second(k);
    image.push_back(prod.space.at(xs.at(ab.space.first(xy), s), ys.at(ab.space.second(xy), s)));
  }
  return recoord_morphism(src, prod.object, image);
}

CCMorphism unit_constraint(const BaseChange& bc, Ring ring) {
  const CCObject src = pull_object(bc, CCObject::unit(ring, bc.target_base()));
  const CCObject tgt = CCObject::unit(ring, bc.source_base());
  const auto over = bc.pull_set(base_set(bc.target_base()));
  std::vector<std::size_t> image;
  for (std::size_t k = 0; k < over.set->size(); ++k) image.push_back(over.over.second(k));
  return recoord_morphism(src, tgt, image);
}

Verdict pull_preserves_compose(const BaseChange& bc, const CCMorphism& u, const CCMorphism& v) {
  const CCMorphism lhs = pull_morphism(bc, cc_compose(u, v).morphism);
  const CCMorphism rhs = cc_compose(pull_morphism(bc, u), pull_morphism(bc, v)).morphism;
  return same_up_to_cell(lhs, rhs, "pull of composite");
}

Verdict pull_preserves_tensor(const BaseChange& bc, const CCMorphism& u, const CCMorphism& v) {
  const CCMorphism lhs =
      cc_compose(pull_morphism(bc, cc_tensor(u, v).morphism), tensor_constraint(bc, u.target(), v.target())).morphism;
  const CCMorphism rhs = cc_compose(tensor_constraint(bc, u.source(), v.source()),
                                    cc_tensor(pull_morphism(bc, u), pull_morphism(bc, v)).morphism)
                             .morphism;
  return same_up_to_cell(lhs, rhs, "pull of tensor");
}

Verdict pull_push_square(const BaseChange& bc, const PushDiagram& d, const CCMorphism& u) {
  const CCMorphism lhs = pull_morphism(bc, shriek_push(d, u));
  const CCMorphism rhs = shriek_push(pull_diagram(bc, d), pull_morphism(bc, u));
  if (!(lhs == rhs)) return Verdict::fail("pull of the pushed morphism differs from the push of the pull");
  return Verdict::pass();
}

BaseChangeCertificate functor_preserves(const BaseChange& bc, const DualityData& dx, const CCMorphism& u,
                                        const CCMorphism& v) {
  BaseChangeCertificate out;
  const Ring ring = u.ring();
  const CCObject a = pull_object(bc, dx.object);
  const DualityData da = make_dual(a);
  if (!(pull_object(bc, dx.dual) == da.dual)) out.dual = Verdict::fail("pull of the dual is not the dual of the pull");

  // ev: constraint then ev' against pull(ev) then unit constraint
  out.ev = same_up_to_cell(cc_compose(tensor_constraint(bc, dx.dual, dx.object), da.ev).morphism,
                           cc_compose(pull_morphism(bc, dx.ev), unit_constraint(bc, ring)).morphism, "ev");
  out.coev = same_up_to_cell(cc_compose(unit_constraint(bc, ring), da.coev).morphism,
                             cc_compose(pull_morphism(bc, dx.coev), tensor_constraint(bc, dx.object, dx.dual)).morphism,
                             "coev");

  const PairingResult below = pairing(u, v, dx);
  const CCMorphism pu = pull_morphism(bc, u), pv = pull_morphism(bc, v);
  const PairingResult above = pairing(pu, pv, da);
  out.pulled_pairing = pull_class(bc, below.omega);
  out.pairing_of_pulled = above.omega;
  {
    const auto f = bc.pull_set(below.locus.apex);
    const auto cs = bc.pull_set(u.corr().apex());
    const auto ds = bc.pull_set(v.corr().apex());
    std::vector<std::size_t> image;
    for (std::size_t k = 0; k < f.set->size(); ++k) {
      const std::size_t gd = f.over.first(k), s = f.over.second(k);
      const auto hit = above.locus.find(cs.at(below.locus.first(gd), s), ds.at(below.locus.second(gd), s));
      if (!hit) {
        out.pairing = Verdict::fail("pulled fixed locus misses '" + f.set->label(k) + "'");
        break;
      }
      image.push_back(*hit);
    }
    if (out.pairing) out.pairing = compare_classes(out.pulled_pairing, out.pairing_of_pulled, image, "pairing");
  }

  const CCMorphism e = cc_compose(u, v).morphism;
  const OmegaClass t_below = pull_class(bc, trace(e, dx));
  const OmegaClass t_above = trace(pull_morphism(bc, e), da);
  {
    std::vector<std::size_t> image;
    for (std::size_t k = 0; k < t_below.carrier->size(); ++k) {
      const auto hit = t_above.carrier->find(t_below.carrier->label(k));
      if (!hit) {
        out.trace = Verdict::fail("pulled fixed points miss '" + t_below.carrier->label(k) + "'");
        break;
      }
      image.push_back(*hit);
    }
    if (out.trace) out.trace = compare_classes(t_below, t_above, image, "trace");
  }

  for (const Verdict* w : {&out.dual, &out.ev, &out.coev, &out.pairing, &out.trace})
    if (!*w && out.verdict) out.verdict = *w;
  return out;
}

}  // namespace spantrace
