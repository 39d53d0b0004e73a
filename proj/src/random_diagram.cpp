#include "spantrace/random_diagram.hpp"

namespace spantrace {

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(draw(rng, 0, static_cast<Scalar>(n) - 1)); }

std::size_t size_in(Rng& rng, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(draw(rng, static_cast<Scalar>(lo), static_cast<Scalar>(hi)));
}

// empty apex one time in eight
std::size_t apex_size(Rng& rng, std::size_t max) { return draw(rng, 0, 7) == 0 ? 0 : size_in(rng, 1, max); }

std::vector<std::string> labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Fresh set of n elements over `below`; the first min(n, |below|) hit each
/// element once, so fibers are rarely empty.
OverMap lift_set(Rng& rng, const SetRef& below, std::size_t n, const std::string& prefix) {
  std::vector<std::size_t> graph, anchor;
  for (std::size_t i = 0; i < n; ++i) {
    graph.push_back(i < below->size() ? i : pick(rng, below->size()));
    anchor.push_back(below->anchor(graph.back()));
  }
  return OverMap(make_set(below->base(), labels(prefix, n), std::move(anchor)), below, std::move(graph));
}

std::vector<std::vector<std::size_t>> fibers_of(const OverMap& f) {
  std::vector<std::vector<std::size_t>> out(f.target()->size());
  for (std::size_t i = 0; i < f.source()->size(); ++i) out[f(i)].push_back(i);
  return out;
}

struct Legs {
  std::vector<std::size_t> left, right, anchor;
};

Span make_span(const SetRef& from, const SetRef& to, const std::string& prefix, const Legs& legs) {
  SetRef apex = make_set(from->base(), labels(prefix, legs.left.size()), legs.anchor);
  return Span(OverMap(apex, from, legs.left), OverMap(apex, to, legs.right));
}

/// Lower span over pairs of X' x_S Y'; `mirror` (if given) is a span Y' -> X'
/// whose elements are reflected: always the first, then two thirds of the time.
Span lower_span(Rng& rng, const SetRef& from, const SetRef& to, std::size_t n, const std::string& prefix,
                const Span* mirror) {
  const FiberProduct pairs = product_over_base(from, to);
  Legs legs;
  if (pairs.apex->empty()) return make_span(from, to, prefix, legs);
  for (std::size_t i = 0; i < n; ++i) {
    if (mirror && !mirror->apex()->empty() && (i == 0 || draw(rng, 0, 2) > 0)) {
      const std::size_t k = pick(rng, mirror->apex()->size());
      legs.left.push_back(mirror->right(k));
      legs.right.push_back(mirror->left(k));
      legs.anchor.push_back(mirror->apex()->anchor(k));
      continue;
    }
    const std::size_t k = pick(rng, pairs.apex->size());
    legs.left.push_back(pairs.first(k));
    legs.right.push_back(pairs.second(k));
    legs.anchor.push_back(pairs.apex->anchor(k));
  }
  return make_span(from, to, prefix, legs);
}

struct Upper {
  Span span;
  OverMap down;
};

/// Upper span over `lower` through f (left) and g (right); elements of
/// `mirror` are reflected (the first always, the rest two thirds of the time)
/// when the lower span allows.
Upper upper_span(Rng& rng, const Span& lower, const OverMap& f, const OverMap& g, std::size_t n,
                 const std::string& prefix, const Span* mirror) {
  const auto ff = fibers_of(f), gf = fibers_of(g);
  std::vector<std::size_t> eligible;
  for (std::size_t k = 0; k < lower.apex()->size(); ++k)
    if (!ff[lower.left(k)].empty() && !gf[lower.right(k)].empty()) eligible.push_back(k);
  // mirror elements with a lower element to sit over
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> reflectable;
  if (mirror)
    for (std::size_t m = 0; m < mirror->apex()->size(); ++m) {
      std::vector<std::size_t> over;
      for (std::size_t k = 0; k < lower.apex()->size(); ++k)
        if (lower.left(k) == f(mirror->right(m)) && lower.right(k) == g(mirror->left(m))) over.push_back(k);
      if (!over.empty()) reflectable.emplace_back(m, std::move(over));
    }
  Legs legs;
  std::vector<std::size_t> down;
  if (!eligible.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reflectable.empty() && (i == 0 || draw(rng, 0, 2) > 0)) {
        const auto& [m, over] = reflectable[pick(rng, reflectable.size())];
        const std::size_t k = over[pick(rng, over.size())];
        legs.left.push_back(mirror->right(m));
        legs.right.push_back(mirror->left(m));
        legs.anchor.push_back(lower.apex()->anchor(k));
        down.push_back(k);
        continue;
      }
      const std::size_t k = eligible[pick(rng, eligible.size())];
      const auto& xs = ff[lower.left(k)];
      const auto& ys = gf[lower.right(k)];
      legs.left.push_back(xs[pick(rng, xs.size())]);
      legs.right.push_back(ys[pick(rng, ys.size())]);
      legs.anchor.push_back(lower.apex()->anchor(k));
      down.push_back(k);
    }
  }
  Span span = make_span(f.source(), g.source(), prefix, legs);
  OverMap p(span.apex(), lower.apex(), std::move(down));
  return Upper{std::move(span), std::move(p)};
}

}  // namespace

void check_params(const GenParams& p) {
  if (p.max_set == 0) throw Error("max-set must be positive");
  if (p.deg_min > p.deg_max) throw Error("deg-min exceeds deg-max");
  if (p.modulus < 0 || p.modulus == 1) throw Error("modulus must be 0 or at least 2");
  if (p.base_points > p.max_set) throw Error("base points exceed max-set");
}

LVDiagram random_lv_diagram(Rng& rng, const GenParams& params) {
  check_params(params);
  const Ring ring(params.modulus);
  const std::size_t nb = params.base_points ? params.base_points : size_in(rng, 1, std::min<std::size_t>(2, params.max_set));
  const BaseRef base = make_base(labels("s", nb));

  std::vector<std::size_t> xa, ya;
  const std::size_t nxp = size_in(rng, 1, params.max_set), nyp = size_in(rng, 1, params.max_set);
  for (std::size_t i = 0; i < nxp; ++i) xa.push_back(pick(rng, nb));
  for (std::size_t i = 0; i < nyp; ++i) ya.push_back(pick(rng, nb));
  const SetRef xp = make_set(base, labels("x'", nxp), std::move(xa));
  const SetRef yp = make_set(base, labels("y'", nyp), std::move(ya));

  const Span lc = lower_span(rng, xp, yp, apex_size(rng, params.max_set), "c'", nullptr);
  const Span ld = lower_span(rng, yp, xp, apex_size(rng, params.max_set), "d'", &lc);

  const OverMap f = lift_set(rng, xp, size_in(rng, nxp, params.max_set), "x");
  const OverMap g = lift_set(rng, yp, size_in(rng, nyp, params.max_set), "y");
  Upper c = upper_span(rng, lc, f, g, apex_size(rng, params.max_set), "c", nullptr);
  Upper d = upper_span(rng, ld, g, f, apex_size(rng, params.max_set), "d", &c.span);

  std::vector<NormalComplex> ln, mn;
  std::vector<ComplexRef> ls, ms;
  for (std::size_t i = 0; i < f.source()->size(); ++i) {
    ln.push_back(random_normal_complex(rng, ring, params.max_rank, params.deg_min, params.deg_max));
    ls.push_back(ln.back().complex);
  }
  for (std::size_t i = 0; i < g.source()->size(); ++i) {
    mn.push_back(random_normal_complex(rng, ring, params.max_rank, params.deg_min, params.deg_max));
    ms.push_back(mn.back().complex);
  }
  const CCObject a{Sheaf(ring, f.source(), std::move(ls))};
  const CCObject b{Sheaf(ring, g.source(), std::move(ms))};
  std::vector<ChainMap> us, vs;
  for (std::size_t k = 0; k < c.span.apex()->size(); ++k)
    us.push_back(random_chain_map(rng, ln[c.span.left(k)], mn[c.span.right(k)]));
  for (std::size_t k = 0; k < d.span.apex()->size(); ++k)
    vs.push_back(random_chain_map(rng, mn[d.span.left(k)], ln[d.span.right(k)]));
  CCMorphism u = CCMorphism::assemble(a, b, c.span, std::move(us));
  CCMorphism v = CCMorphism::assemble(b, a, d.span, std::move(vs));
  return LVDiagram{f, g, std::move(c.down), std::move(d.down), lc, ld, std::move(u), std::move(v)};
}

OverMap random_base_change(Rng& rng, const BaseRef& target, std::size_t max_points) {
  const SetRef t = base_set(target);
  const std::size_t n = target->points.empty() ? 0 : size_in(rng, 0, max_points);
  std::vector<std::size_t> graph;
  for (std::size_t i = 0; i < n; ++i) graph.push_back(pick(rng, target->points.size()));
  return OverMap(make_set(target, labels("r", n), graph), t, graph);
}

}  // namespace spantrace
