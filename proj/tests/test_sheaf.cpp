#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "finspan_gen.hpp"
#include "spantrace/sheaf.hpp"

using namespace spantrace;

namespace {

const Ring Z = Ring::integers();
const BaseRef pt = make_base({"s"});

SetRef set_of(std::vector<std::string> labels, const BaseRef& base = pt) {
  std::vector<std::size_t> anchor(labels.size(), 0);
  return make_set(base, std::move(labels), std::move(anchor));
}

ComplexRef unit_cx(Ring ring = Z) { return share(Complex::unit(ring)); }
ComplexRef q_cx(Ring ring = Z) {
  return share(Complex(ring, {{0, 1}, {1, 1}}, {{0, Matrix::from_rows(ring, {{2}})}}));
}

Sheaf random_sheaf(std::mt19937_64& rng, Ring ring, const SetRef& x) {
  std::vector<ComplexRef> stalks;
  for (std::size_t i = 0; i < x->size(); ++i) stalks.push_back(share(support::random_complex(rng, ring, 2, -1, 1)));
  return Sheaf(ring, x, std::move(stalks));
}

bool single_degree(const Complex& c) { return c.degrees().size() <= 1; }

}  // namespace

TEST_CASE("sheaf construction") {
  const SetRef x = set_of({"a", "b"});
  CHECK_THROWS_AS(Sheaf(Z, x, {unit_cx()}), Error);
  CHECK_THROWS_AS(Sheaf(Z, x, {unit_cx(), unit_cx(Ring(7))}), Error);
  const Complex bad(Z, {{0, 1}, {1, 1}, {2, 1}},
                    {{0, Matrix::from_rows(Z, {{1}})}, {1, Matrix::from_rows(Z, {{1}})}});
  const Verdict v = sheaf_validate(Sheaf(Z, x, {unit_cx(), share(bad)}));
  CHECK(!v);
  CHECK(v.detail.find("'b'") != std::string::npos);
}

TEST_CASE("pull and upper_shriek examples") {
  const SetRef x = set_of({"a", "b"});
  const SetRef y = set_of({"y"});
  const Sheaf l(Z, x, {unit_cx(), q_cx()});
  CHECK(pull(OverMap::identity(x), l) == l);
  CHECK(upper_shriek(OverMap::identity(x), l) == l);

  const SetRef empty = set_of({});
  CHECK(pull(OverMap(empty, x, {}), l).stalks().empty());
  CHECK(upper_shriek(OverMap(empty, x, {}), l).stalks().empty());

  const Sheaf m(Z, y, {q_cx()});
  const OverMap f(x, y, {0, 0});
  for (const Sheaf& s : {pull(f, m), upper_shriek(f, m)}) {
    CHECK(*s.stalk(0) == *q_cx());
    CHECK(*s.stalk(1) == *q_cx());
  }
  CHECK_THROWS_AS(pull(f, l), Error);
}

TEST_CASE("push examples") {
  const SetRef x = set_of({"a", "b"});
  const SetRef y = set_of({"y"});
  const Sheaf l(Z, x, {unit_cx(), share(Complex::free(Z, 0, 2))});
  CHECK(push(OverMap::identity(x), l) == l);

  const Sheaf pushed = push(OverMap(x, y, {0, 0}), l);
  CHECK(pushed.stalk(0)->rank(0) == 1 + 2);
  CHECK(pushed.stalk(0)->total_rank() == 3);

  const SetRef empty = set_of({});
  const Sheaf from_empty = push(OverMap(empty, y, {}), Sheaf(Z, empty, {}));
  CHECK(from_empty.stalk(0)->is_zero());
  CHECK_THROWS_AS(push(OverMap(y, y, {0}), l), Error);
}

TEST_CASE("box, verdier and sheaf_hom examples") {
  const SetRef a = set_of({"a"});
  const SetRef b = set_of({"b"});
  const Sheaf l(Z, a, {unit_cx()});
  const Sheaf m(Z, b, {q_cx()});
  const Sheaf lm = box(l, m);
  CHECK(lm.carrier()->labels() == std::vector<std::string>{"(a,b)"});
  CHECK(*lm.stalk(0) == *q_cx());

  const Sheaf u = Sheaf::unit(Z, pt);
  const Sheaf mu = box(m, u);
  CHECK(mu.stalks().size() == 1);
  CHECK(*mu.stalk(0) == *m.stalk(0));
  CHECK(box(m, Sheaf(Z, set_of({}), {})).stalks().empty());
  CHECK_THROWS_AS(box(m, Sheaf(Ring(7), b, {unit_cx(Ring(7))})), Error);
  CHECK_THROWS_AS(box(m, Sheaf(Z, set_of({"t"}, make_base({"t"})), {unit_cx()})), Error);

  const Sheaf cst = Sheaf::constant(Z, set_of({"a", "b"}), unit_cx());
  CHECK(verdier(cst) == cst);
  CHECK(verdier(Sheaf(Z, set_of({}), {})).stalks().empty());
  CHECK(*verdier(m).stalk(0) == cx_dual(*q_cx()));
  CHECK(verdier(verdier(m)) == m);

  CHECK(*sheaf_hom(u, m).stalk(0) == *q_cx());
  CHECK(*sheaf_hom(m, u).stalk(0) == *verdier(m).stalk(0));
  const Sheaf two(Z, a, {share(Complex::free(Z, 0, 2))});
  const Sheaf hom = sheaf_hom(two, l);
  CHECK(hom.stalk(0)->ranks() == std::map<Degree, std::size_t>{{0, 2}});
  const SetRef two_points = make_set(make_base({"s", "t"}), {"a", "b"}, {0, 1});
  const SetRef only_t = make_set(two_points->base(), {"c"}, {1});
  const Sheaf hom_disjoint =
      sheaf_hom(Sheaf(Z, two_points, {unit_cx(), unit_cx()}), Sheaf(Z, only_t, {unit_cx()}));
  CHECK(hom_disjoint.carrier()->labels() == std::vector<std::string>{"(b,c)"});
}

TEST_CASE("omega_push examples") {
  const SetRef x = set_of({"a", "b", "c"});
  const SetRef y = set_of({"y"});
  const OmegaClass a{Z, x, {1, 2, 3}};
  CHECK(omega_push(OverMap::identity(x), a) == a);
  CHECK(omega_push(OverMap(x, y, {0, 0, 0}), a).values == std::vector<Scalar>{6});
  const SetRef y2 = set_of({"y", "z"});
  CHECK(omega_push(OverMap(x, y2, {0, 0, 0}), a).values == std::vector<Scalar>{6, 0});
  const OmegaClass a7{Ring(7), x, {3, 4, 5}};
  CHECK(omega_push(OverMap(x, y, {0, 0, 0}), a7).values == std::vector<Scalar>{5});
}

TEST_CASE("property: base change, Kunneth, functoriality") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Ring ring = trial % 2 ? Ring(7) : Z;
    const BaseRef base = make_base(trial % 3 ? std::vector<std::string>{"s"} : std::vector<std::string>{"s", "t"});
    const SetRef x = support::random_set(rng, base, 3, "x");
    const SetRef y = support::random_set(rng, base, 3, "y");
    const SetRef y2 = support::random_set(rng, base, 3, "v");
    const SetRef z = support::random_set(rng, base, 3, "z");
    auto f = support::random_map(rng, x, y);
    auto g = support::random_map(rng, y2, y);
    auto h = support::random_map(rng, y, z);
    const Sheaf l = random_sheaf(rng, ring, x);
    const Sheaf m = random_sheaf(rng, ring, z);
    REQUIRE(sheaf_validate(l));

    if (f && g) {
      // Base change along the chosen square is a strict equality.
      const FiberProduct sq = fiber_product(*f, *g);
      CHECK(push(sq.second, pull(sq.first, l)) == pull(*g, push(*f, l)));
    }
    if (f && h) {
      // Summands follow carrier order, so push is functorial on the nose only
      // when f preserves order; otherwise the stalks agree up to reordering.
      const Sheaf once = push(compose(*h, *f), l), twice = push(*h, push(*f, l));
      if (std::is_sorted(f->graph().begin(), f->graph().end())) CHECK(once == twice);
      for (std::size_t k = 0; k < z->size(); ++k) CHECK(once.stalk(k)->ranks() == twice.stalk(k)->ranks());
      OmegaClass a{ring, x, {}};
      for (std::size_t i = 0; i < x->size(); ++i) a.values.push_back(support::draw(rng, -5, 5));
      a.values = [&] {
        std::vector<Scalar> v;
        for (auto s : a.values) v.push_back(ring.normalize(s));
        return v;
      }();
      CHECK(omega_push(compose(*h, *f), a) == omega_push(*h, omega_push(*f, a)));
    }
    if (f) {
      // Kunneth for f x id: stalkwise the canonical distributor, strict when
      // degrees are concentrated.
      const FiberProduct src = product_over_base(x, z), tgt = product_over_base(y, z);
      const OverMap fz = map_product(*f, OverMap::identity(z), src, tgt);
      const Sheaf lhs = push(fz, box(l, m, src));
      const Sheaf rhs = box(push(*f, l), m, tgt);
      for (std::size_t k = 0; k < tgt.apex->size(); ++k) {
        const auto fib = f->fiber(tgt.first(k));
        if (fib.size() < 2) {
          CHECK(*lhs.stalk(k) == *rhs.stalk(k));
          continue;
        }
        std::vector<ComplexRef> parts;
        bool concentrated = single_degree(*m.stalk(tgt.second(k)));
        for (auto i : fib) {
          parts.push_back(l.stalk(i));
          concentrated &= single_degree(*l.stalk(i));
        }
        const ChainMap dist = sum_tensor_distributor(parts, m.stalk(tgt.second(k)));
        CHECK(dist.source() == *rhs.stalk(k));
        CHECK(dist.target() == *lhs.stalk(k));
        CHECK(chain_map_check(dist));
        if (concentrated) CHECK(dist == ChainMap::identity(rhs.stalk(k)));
      }
      // Upper-shriek Kunneth is strict.
      const FiberProduct tz = product_over_base(y, z);
      const FiberProduct sz = product_over_base(x, z);
      const Sheaf ym = random_sheaf(rng, ring, y);
      CHECK(upper_shriek(map_product(*f, OverMap::identity(z), sz, tz), box(ym, m, tz)) ==
            box(upper_shriek(*f, ym), m, sz));
    }
    CHECK(verdier(verdier(l)) == l);
  }
}

TEST_CASE("sum_tensor_distributor is a permutation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ComplexRef> parts;
    const int k = static_cast<int>(support::draw(rng, 1, 3));
    for (int i = 0; i < k; ++i) parts.push_back(share(support::random_complex(rng, Z, 2, -1, 1)));
    const auto m = share(support::random_complex(rng, Z, 2, -1, 1));
    const ChainMap d = sum_tensor_distributor(parts, m);
    for (auto& [n, mat] : d.components()) {
      REQUIRE(mat.square());
      for (std::size_t r = 0; r < mat.rows(); ++r) {
        int ones = 0;
        for (std::size_t c = 0; c < mat.cols(); ++c) {
          CHECK((mat(r, c) == 0 || mat(r, c) == 1));
          ones += mat(r, c) == 1;
        }
        CHECK(ones == 1);
      }
    }
  }
}
