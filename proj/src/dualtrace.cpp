#include "spantrace/dualtrace.hpp"

#include <sstream>

namespace spantrace {

namespace {

CCMorphism chain(const std::vector<CCMorphism>& steps) {
  CCMorphism acc = steps.front();
  for (std::size_t i = 1; i < steps.size(); ++i) acc = cc_compose(acc, steps[i]).morphism;
  return acc;
}

Scalar unit_value(const ChainMap& m) {
  const Matrix c = m.component(0);
  return c.empty() ? 0 : c(0, 0);
}

CCCell certify(const CCMorphism& composite, const CCMorphism& target, const char* which) {
  auto cell = cc_iso_search(composite, target);
  if (!cell) throw Error(std::string("make_dual: ") + which + " triangle is not isomorphic to the identity");
  if (Verdict v = cc_cell_check(*cell); !v) throw Error(std::string("make_dual: ") + which + " triangle: " + v.detail);
  return *cell;
}

CCMorphism first_triangle(const DualityData& d) {
  const CCObject& a = d.object;
  return chain({cc_left_unitor_inverse(a), cc_tensor(d.coev, CCMorphism::identity(a)).morphism,
                cc_associator(a, d.dual, a), cc_tensor(CCMorphism::identity(a), d.ev).morphism,
                cc_right_unitor(a)});
}

CCMorphism second_triangle(const DualityData& d) {
  const CCObject& a = d.object;
  const CCObject& ad = d.dual;
  return chain({cc_right_unitor_inverse(ad), cc_tensor(CCMorphism::identity(ad), d.coev).morphism,
                cc_associator_inverse(ad, a, ad), cc_tensor(d.ev, CCMorphism::identity(ad)).morphism,
                cc_left_unitor(ad)});
}

std::string value_text(Scalar a) { return std::to_string(a); }

}  // namespace

DualityData make_dual(const CCObject& a) {
  const Ring ring = a.ring();
  const SetRef& x = a.space();
  const CCObject dual{verdier(a.sheaf)};
  const CCObject unit = CCObject::unit(ring, a.base());
  const CCTensorObject da = cc_tensor_object(dual, a);
  const CCTensorObject ad = cc_tensor_object(a, dual);

  std::vector<std::size_t> diag_da(x->size()), diag_ad(x->size());
  std::vector<ChainMap> evs, coevs;
  for (std::size_t i = 0; i < x->size(); ++i) {
    diag_da[i] = da.space.at(i, i);
    diag_ad[i] = ad.space.at(i, i);
    evs.push_back(evaluation(a.sheaf.stalk(i)));
    coevs.push_back(coevaluation(a.sheaf.stalk(i)));
  }
  CCMorphism ev(da.object, unit, Span(OverMap(x, da.space.apex, diag_da), OverMap::anchor_map(x)), std::move(evs));
  CCMorphism coev(unit, ad.object, Span(OverMap::anchor_map(x), OverMap(x, ad.space.apex, diag_ad)),
                  std::move(coevs));

  DualityData d{a, dual, std::move(ev), std::move(coev), CCCell{CCMorphism::identity(a), CCMorphism::identity(a),
                                                                OverMap::identity(x)},
                CCCell{CCMorphism::identity(dual), CCMorphism::identity(dual), OverMap::identity(x)}};
  d.first_triangle = certify(first_triangle(d), CCMorphism::identity(a), "first");
  d.second_triangle = certify(second_triangle(d), CCMorphism::identity(dual), "second");
  return d;
}

Verdict duality_check(const DualityData& d) {
  if (!(d.dual.sheaf == verdier(d.object.sheaf))) return Verdict::fail("dual is not the Verdier dual");
  if (!(verdier(d.dual.sheaf) == d.object.sheaf)) return Verdict::fail("biduality is not strict");
  if (Verdict v = cc_validate(d.ev); !v) return Verdict::fail("ev: " + v.detail);
  if (Verdict v = cc_validate(d.coev); !v) return Verdict::fail("coev: " + v.detail);
  const CCMorphism t1 = first_triangle(d);
  if (!(d.first_triangle.source == t1)) return Verdict::fail("first triangle certificate is stale");
  if (Verdict v = cc_cell_check(d.first_triangle); !v) return Verdict::fail("first triangle: " + v.detail);
  if (!cc_cell_invertible(d.first_triangle)) return Verdict::fail("first triangle cell is not invertible");
  const CCMorphism t2 = second_triangle(d);
  if (!(d.second_triangle.source == t2)) return Verdict::fail("second triangle certificate is stale");
  if (Verdict v = cc_cell_check(d.second_triangle); !v) return Verdict::fail("second triangle: " + v.detail);
  if (!cc_cell_invertible(d.second_triangle)) return Verdict::fail("second triangle cell is not invertible");
  return Verdict::pass();
}

CCMorphism dual_of_morphism(const CCMorphism& u, const DualityData& da, const DualityData& db) {
  if (!(u.source() == da.object) || !(u.target() == db.object))
    throw Error("dual_of_morphism: duality data does not match the endpoints");
  const CCMorphism id_bd = CCMorphism::identity(db.dual);
  const CCMorphism id_ad = CCMorphism::identity(da.dual);
  return chain({cc_right_unitor_inverse(db.dual), cc_tensor(id_bd, da.coev).morphism,
                cc_associator_inverse(db.dual, da.object, da.dual),
                cc_tensor(cc_tensor(id_bd, u).morphism, id_ad).morphism, cc_tensor(db.ev, id_ad).morphism,
                cc_left_unitor(da.dual)});
}

CCMorphism transpose_morphism(const CCMorphism& u) {
  std::vector<ChainMap> maps;
  for (auto& m : u.maps()) maps.push_back(map_dual(m));
  return CCMorphism(CCObject{verdier(u.target().sheaf)}, CCObject{verdier(u.source().sheaf)},
                    Span(u.corr().right, u.corr().left), std::move(maps));
}

// ---------------------------------------------------------------------------

FiberProduct fixed_locus(const Span& c, const Span& d) {
  if (!same_set(c.from(), d.to()) || !same_set(c.to(), d.from()))
    throw Error("fixed_locus: spans are not X -> Y and Y -> X");
  const FiberProduct xy = product_over_base(c.from(), c.to());
  std::vector<std::size_t> cg(c.apex()->size()), dg(d.apex()->size());
  for (std::size_t g = 0; g < cg.size(); ++g) cg[g] = xy.at(c.left(g), c.right(g));
  for (std::size_t e = 0; e < dg.size(); ++e) dg[e] = xy.at(d.right(e), d.left(e));
  return fiber_product(OverMap(c.apex(), xy.apex, std::move(cg)), OverMap(d.apex(), xy.apex, std::move(dg)));
}

PairingResult pairing(const CCMorphism& u, const CCMorphism& v, const DualityData& dx) {
  if (!(u.source() == dx.object) || !(v.target() == dx.object))
    throw Error("pairing: duality data does not match the source of u");
  FiberProduct locus = fixed_locus(u.corr(), v.corr());
  const CCComposite e = cc_compose(u, v);
  const CCTensor t = cc_tensor(e.morphism, CCMorphism::identity(dx.dual));
  const CCComposite s1 = cc_compose(dx.coev, t.morphism);
  const CCComposite s2 = cc_compose(s1.morphism, cc_symmetry(dx.object, dx.dual));
  const CCComposite s3 = cc_compose(s2.morphism, dx.ev);

  const std::size_t n = locus.apex->size();
  std::vector<Scalar> values(n, 0);
  std::vector<bool> hit(n, false);
  const SetRef& apex = s3.morphism.corr().apex();
  for (std::size_t k = 0; k < apex->size(); ++k) {
    const std::size_t ek = t.apex.first(s1.apex.second(s2.apex.first(s3.apex.first(k))));
    const auto at = locus.find(e.apex.first(ek), e.apex.second(ek));
    if (!at || hit[*at]) throw Error("pairing: composite apex does not recoordinate onto the fixed locus");
    hit[*at] = true;
    values[*at] = unit_value(s3.morphism.map(k));
  }
  if (apex->size() != n) throw Error("pairing: composite apex does not recoordinate onto the fixed locus");
  return PairingResult{OmegaClass{u.ring(), locus.apex, std::move(values)}, std::move(locus)};
}

OmegaClass local_pairing(const CCMorphism& u, const CCMorphism& v) {
  const FiberProduct locus = fixed_locus(u.corr(), v.corr());
  std::vector<Scalar> values;
  for (std::size_t k = 0; k < locus.apex->size(); ++k)
    values.push_back(alt_trace(map_compose(v.map(locus.second(k)), u.map(locus.first(k)))));
  return OmegaClass{u.ring(), locus.apex, std::move(values)};
}

FixedPoints fixed_points(const Span& e) {
  if (!same_set(e.from(), e.to())) throw Error("fixed_points: not an endo-correspondence");
  std::vector<std::string> labels;
  std::vector<std::size_t> anchor, inclusion;
  for (std::size_t g = 0; g < e.apex()->size(); ++g) {
    if (e.left(g) != e.right(g)) continue;
    labels.push_back(e.apex()->label(g));
    anchor.push_back(e.apex()->anchor(g));
    inclusion.push_back(g);
  }
  return FixedPoints{make_set(e.apex()->base(), std::move(labels), std::move(anchor)), std::move(inclusion)};
}

OmegaClass trace(const CCMorphism& e, const DualityData& dx) {
  const PairingResult r = pairing(e, CCMorphism::identity(e.target()), dx);
  const FixedPoints fp = fixed_points(e.corr());
  std::vector<std::size_t> where(e.corr().apex()->size(), 0);
  for (std::size_t i = 0; i < fp.inclusion.size(); ++i) where[fp.inclusion[i]] = i;
  std::vector<std::size_t> image(r.locus.apex->size());
  for (std::size_t k = 0; k < image.size(); ++k) image[k] = where[r.locus.first(k)];
  return omega_transport(r.omega, fp.set, image);
}

OmegaClass characteristic_class(const DualityData& dx) { return trace(CCMorphism::identity(dx.object), dx); }

SymmetryCertificate pairing_symmetry(const CCMorphism& u, const CCMorphism& v, const DualityData& dx,
                                     const DualityData& dy) {
  PairingResult uv = pairing(u, v, dx);
  PairingResult vu = pairing(v, u, dy);
  Bijection swap;
  for (std::size_t k = 0; k < uv.locus.apex->size(); ++k)
    swap.image.push_back(vu.locus.at(uv.locus.second(k), uv.locus.first(k)));
  Verdict verdict;
  if (swap.image.size() != vu.locus.apex->size()) verdict = Verdict::fail("fixed loci have different sizes");
  for (std::size_t k = 0; k < swap.image.size() && verdict.ok; ++k) {
    const Scalar a = uv.omega.values[k], b = vu.omega.values[swap.image[k]];
    if (a != b)
      verdict = Verdict::fail("symmetry fails at '" + uv.locus.apex->label(k) + "': " + value_text(a) +
                              " vs " + value_text(b));
  }
  return SymmetryCertificate{std::move(uv), std::move(vu), std::move(swap), std::move(verdict)};
}

// ---------------------------------------------------------------------------

PushDiagram LVDiagram::c_square() const { return PushDiagram{f, p, g, u.corr(), lower_c}; }
PushDiagram LVDiagram::d_square() const { return PushDiagram{g, q, f, v.corr(), lower_d}; }

Verdict lv_diagram_check(const LVDiagram& d) {
  if (!(d.u.source() == d.v.target()) || !(d.u.target() == d.v.source()))
    return Verdict::fail("u and v are not X -> Y and Y -> X");
  if (Verdict v = diagram_check(d.c_square()); !v) return Verdict::fail("c square: " + v.detail);
  if (Verdict v = diagram_check(d.d_square()); !v) return Verdict::fail("d square: " + v.detail);
  if (Verdict v = cc_validate(d.u); !v) return Verdict::fail("u: " + v.detail);
  if (Verdict v = cc_validate(d.v); !v) return Verdict::fail("v: " + v.detail);
  return Verdict::pass();
}

Splitting adjunction_splitting(const LVDiagram& d, const CCMorphism& u_pushed) {
  const Sheaf& l = d.u.source().sheaf;
  const Sheaf& m = d.u.target().sheaf;
  const CCMorphism lower = f_natural(d.f, l);
  const CCMorphism upper = f_conatural(d.f, l);
  const CCComposite w = cc_compose(upper, d.u);

  // u -> (id then u) -> ((f_nat then f^nat) then u) -> (f_nat then (f^nat then u))
  CCCell gamma = cc_cell_vertical(
      cc_cell_vertical(cc_left_unit_cell_inverse(d.u), cc_whisker_first(adjunction_unit(d.f, l), d.u)),
      cc_assoc_cell(lower, upper, d.u));
  CCComposite f_then_w = cc_compose(lower, w.morphism);
  CCComposite w_then_g = cc_compose(w.morphism, f_natural(d.g, m));

  // (w then g_nat) -> u': the (x, g, y) summand lands in the block of p(g)
  std::vector<std::size_t> graph(w_then_g.apex.apex->size());
  for (std::size_t k = 0; k < graph.size(); ++k) graph[k] = d.p(w.apex.second(w_then_g.apex.first(k)));
  CCCell delta{w_then_g.morphism, u_pushed, OverMap(w_then_g.apex.apex, d.lower_c.apex(), std::move(graph))};
  return Splitting{w.morphism, std::move(f_then_w), std::move(w_then_g), std::move(gamma), std::move(delta)};
}

OverMap splitting_map(const LVDiagram& d, const Splitting& split, const CCMorphism& v_pushed,
                      const FiberProduct& upper, const FiberProduct& lower) {
  const CCMorphism fl = f_natural(d.f, d.u.source().sheaf);
  const CCMorphism gl = f_natural(d.g, d.u.target().sheaf);
  const CCComposite fv = cc_compose(d.v, fl);
  const CCComposite gv = cc_compose(gl, v_pushed);
  const CCCell beta = shriek_push_cell(d.d_square(), d.v, v_pushed);
  const Span& w = split.w.corr();
  const Span& fvs = fv.morphism.corr();

  std::vector<std::size_t> graph(upper.apex->size());
  for (std::size_t k = 0; k < graph.size(); ++k) {
    const std::size_t g = upper.first(k), e = upper.second(k);
    // <u,v> = <v,u> -> <fv,w>
    const std::size_t omega = split.f_then_w.apex.second(split.gamma.graph(g));
    const std::size_t phi = fv.apex.at(e, d.v.corr().right(e));
    if (w.left(omega) != fvs.right(phi) || w.right(omega) != fvs.left(phi))
      throw Error("splitting_map: (" + w.apex()->label(omega) + ", " + fvs.apex()->label(phi) +
                  ") is not a fixed point of (w, fv)");
    // <fv,w> = <w,fv> -> <u',v'>
    const std::size_t gp = split.delta.graph(split.w_then_g.apex.at(omega, w.right(omega)));
    const std::size_t ep = gv.apex.second(beta.graph(phi));
    const auto at = lower.find(gp, ep);
    if (!at) throw Error("splitting_map: image is not in the lower fixed locus");
    graph[k] = *at;
  }
  return OverMap(upper.apex, lower.apex, std::move(graph));
}

LVResult pairing_functorial(const LVDiagram& d, const DualityData& dx, const DualityData& dx_lower,
                            const std::optional<Splitting>& split) {
  if (Verdict v = lv_diagram_check(d); !v) throw Error("pairing_functorial: " + v.detail);
  const CCMorphism up = shriek_push(d.c_square(), d.u);
  const CCMorphism vp = shriek_push(d.d_square(), d.v);
  const Splitting sp = split ? *split : adjunction_splitting(d, up);

  PairingResult upper = pairing(d.u, d.v, dx);
  PairingResult lower = pairing(up, vp, dx_lower);
  OverMap s = splitting_map(d, sp, vp, upper.locus, lower.locus);
  OmegaClass lhs = omega_push(s, upper.omega);
  OmegaClass rhs = lower.omega;

  Verdict verdict;
  auto note = [&verdict](const std::string& why) {
    if (verdict.ok) verdict = Verdict::fail(why);
  };
  if (Verdict v = cc_cell_check(sp.gamma); !v) note("gamma cell: " + v.detail);
  if (Verdict v = cc_cell_check(sp.delta); !v) note("delta cell: " + v.detail);
  if (Verdict v = cc_cell_check(shriek_push_cell(d.d_square(), d.v, vp)); !v) note("push cell of v: " + v.detail);
  for (std::size_t k = 0; k < upper.locus.apex->size(); ++k) {
    const auto direct = lower.locus.find(d.p(upper.locus.first(k)), d.q(upper.locus.second(k)));
    if (!direct || *direct != s(k)) {
      note("induced map differs from (p, q) at '" + upper.locus.apex->label(k) + "'");
      break;
    }
  }
  for (std::size_t k = 0; k < rhs.values.size(); ++k)
    if (lhs.values[k] != rhs.values[k]) {
      note("pushed class differs at '" + rhs.carrier->label(k) + "': " + value_text(lhs.values[k]) + " vs " +
           value_text(rhs.values[k]));
      break;
    }
  return LVResult{std::move(s), std::move(lhs), std::move(rhs), std::move(upper), std::move(lower),
                  std::move(verdict)};
}

LVResult pairing_functorial(const LVDiagram& d) {
  const DualityData dx = make_dual(d.u.source());
  const DualityData dl = make_dual(CCObject{push(d.f, d.u.source().sheaf)});
  return pairing_functorial(d, dx, dl);
}

// ---------------------------------------------------------------------------

Verdict split_epi_criterion(const CCObject& a) {
  const CCObject dual{verdier(a.sheaf)};
  const CCTensorObject src = cc_tensor_object(a, dual);
  const InternalHom hom = internal_hom(a, a);
  const SetRef& apex = src.space.apex;

  std::vector<std::size_t> swap(apex->size());
  std::vector<ChainMap> maps, inverses;
  for (std::size_t k = 0; k < apex->size(); ++k) {
    const std::size_t x = src.space.first(k), y = src.space.second(k);
    swap[k] = hom.space.at(y, x);
    const ComplexRef& lx = a.sheaf.stalk(x);
    const ComplexRef& ly = a.sheaf.stalk(y);
    const ComplexRef& l = src.object.sheaf.stalk(k);
    const ComplexRef& ldy = dual.sheaf.stalk(y);
    // (L_x (x) L_y^v) (x) L_y -> L_x (x) (L_y^v (x) L_y) -> L_x (x) 1 = L_x
    ChainMap u = map_compose(map_tensor(ChainMap::identity(lx), evaluation(ly)), tensor_associator(lx, ldy, ly));
    u = ChainMap(u.source_ref(), lx, u.components());
    ChainMap m = curry(u, l, ly);
    std::map<Degree, Matrix> inv;
    for (auto& [n, c] : m.components()) {
      auto mi = mat_inverse(c);
      if (!mi) return Verdict::fail("m is not invertible at '" + apex->label(k) + "' degree " + std::to_string(n));
      inv.emplace(n, *mi);
    }
    inverses.emplace_back(m.target_ref(), m.source_ref(), std::move(inv));
    maps.push_back(std::move(m));
  }
  const OverMap sw(apex, hom.space.apex, std::move(swap));
  const CCMorphism m(src.object, hom.object, Span(OverMap::identity(apex), sw), std::move(maps));
  const CCMorphism section(hom.object, src.object, Span(sw, OverMap::identity(apex)), std::move(inverses));
  if (Verdict v = cc_validate(m); !v) return Verdict::fail("m: " + v.detail);
  if (Verdict v = cc_validate(section); !v) return Verdict::fail("section: " + v.detail);
  if (!cc_iso_search(cc_compose(section, m).morphism, CCMorphism::identity(hom.object)))
    return Verdict::fail("m o section is not the identity");
  if (!cc_iso_search(cc_compose(m, section).morphism, CCMorphism::identity(src.object)))
    return Verdict::fail("section o m is not the identity");

  const DualityData d = make_dual(a);
  const CCObject unit = CCObject::unit(a.ring(), a.base());
  const CCMorphism named = cc_curry(cc_left_unitor(a), unit, a);
  if (!cc_iso_search(cc_compose(d.coev, m).morphism, named))
    return Verdict::fail("m o coev differs from the curried identity");
  return Verdict::pass();
}

PushedDual push_preserves_dual(const OverMap& f, const DualityData& dx) {
  const Sheaf& l = dx.object.sheaf;
  const Sheaf pushed = push(f, l);
  DualityData d = make_dual(CCObject{pushed});
  Verdict verdict;
  if (!(d.dual.sheaf == push(f, verdier(l)))) verdict = Verdict::fail("dual of the push is not the push of the dual");

  const Ring ring = l.ring();
  std::vector<std::vector<std::size_t>> fibers(f.target()->size());
  for (std::size_t x = 0; x < f.source()->size(); ++x) fibers[f(x)].push_back(x);
  const ComplexRef unit = share(Complex::unit(ring));
  for (std::size_t xp = 0; xp < fibers.size() && verdict.ok; ++xp) {
    const ComplexRef& sum = pushed.stalk(xp);
    std::vector<ComplexRef> parts;
    for (auto x : fibers[xp]) parts.push_back(l.stalk(x));
    ChainMap coev = ChainMap::zero(unit, d.coev.map(xp).target_ref());
    ChainMap ev = ChainMap::zero(d.ev.map(xp).source_ref(), unit);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const ChainMap inc = sum_inclusion(parts, i, sum);
      const ChainMap proj = sum_projection(parts, i, sum);
      const ChainMap c = map_compose(map_tensor(inc, map_dual(proj)), coevaluation(parts[i]));
      const ChainMap e = map_compose(evaluation(parts[i]), map_tensor(map_dual(inc), proj));
      coev = map_add(coev, ChainMap(unit, coev.target_ref(), c.components()));
      ev = map_add(ev, ChainMap(ev.source_ref(), unit, e.components()));
    }
    std::ostringstream where;
    where << " at '" << f.target()->label(xp) << "'";
    if (coev.components() != d.coev.map(xp).components())
      verdict = Verdict::fail("coev differs from the fiberwise sum" + where.str());
    else if (ev.components() != d.ev.map(xp).components())
      verdict = Verdict::fail("ev differs from the fiberwise sum" + where.str());
  }
  return PushedDual{std::move(d), std::move(verdict)};
}

}  // namespace spantrace
