#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "oracle.hpp"
#include "spantrace/basefunc.hpp"
#include "spantrace/random_diagram.hpp"

using namespace spantrace;

namespace {

const Ring Z = Ring::integers();

ComplexRef q_cx(Ring ring = Z) {
  return share(Complex(ring, {{0, 1}, {1, 1}}, {{0, Matrix::from_rows(ring, {{2}})}}));
}

/// S = labels over T, every element over t_anchor[i].
BaseChange change_to(const BaseRef& t, std::vector<std::string> labels, std::vector<std::size_t> anchor) {
  SetRef s = make_set(t, std::move(labels), anchor);
  return BaseChange(OverMap(s, base_set(t), std::move(anchor)));
}

BaseChange identity_change(const BaseRef& t) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < t->points.size(); ++i) idx.push_back(i);
  return change_to(t, t->points, idx);
}

/// One-point base, Y = {y} with stalk Q, loop g at y carrying x3 and the identity.
struct PointExample {
  BaseRef t = make_base({"t"});
  SetRef y = make_set(t, {"y"}, {0});
  CCObject a{Sheaf(Z, y, {q_cx()})};
  SetRef loop = make_set(t, {"g"}, {0});
  CCMorphism u{a, a, Span(OverMap(loop, y, {0}), OverMap(loop, y, {0})), {ChainMap::scalar(a.sheaf.stalk(0), 3)}};
  CCMorphism v = CCMorphism::identity(a);
};

GenParams small_params(std::size_t trial) {
  GenParams p;
  p.max_set = 3;
  p.max_rank = 2;
  p.deg_min = -1;
  p.deg_max = 1;
  p.modulus = trial % 2 == 0 ? 0 : 7;
  return p;
}

}  // namespace

TEST_CASE("pull_object examples") {
  PointExample ex;
  SUBCASE("identity base change keeps the object up to relabelling") {
    const BaseChange bc = identity_change(ex.t);
    const CCObject p = pull_object(bc, ex.a);
    REQUIRE(p.space()->size() == 1);
    CHECK(p.space()->label(0) == "(y,t)");
    CHECK(*p.sheaf.stalk(0) == *ex.a.sheaf.stalk(0));
    CHECK(*bc.source_base() == *bc.target_base());
  }
  SUBCASE("empty S") {
    const BaseChange bc = change_to(ex.t, {}, {});
    CHECK(pull_object(bc, ex.a).space()->empty());
    CHECK(pull_morphism(bc, ex.u).corr().apex()->empty());
  }
  SUBCASE("two points over a point") {
    const BaseChange bc = change_to(ex.t, {"s1", "s2"}, {0, 0});
    const CCObject p = pull_object(bc, ex.a);
    // fiber product {y} x_t {s1, s2}
    REQUIRE(p.space()->labels() == std::vector<std::string>{"(y,s1)", "(y,s2)"});
    CHECK(p.space()->anchors() == std::vector<std::size_t>{0, 1});
    CHECK(*p.sheaf.stalk(0) == *q_cx());
    CHECK(*p.sheaf.stalk(1) == *q_cx());
  }
  SUBCASE("a set over another base is rejected") {
    const BaseChange bc = change_to(ex.t, {"s1"}, {0});
    const BaseRef other = make_base({"o"});
    const CCObject b{Sheaf(Z, make_set(other, {"z"}, {0}), {q_cx()})};
    CHECK_THROWS_AS(pull_object(bc, b), Error);
  }
}

TEST_CASE("pull_morphism examples") {
  PointExample ex;
  SUBCASE("identity base change") {
    const CCMorphism p = pull_morphism(identity_change(ex.t), ex.u);
    REQUIRE(p.corr().apex()->size() == 1);
    CHECK(p.map(0) == ex.u.map(0));
  }
  SUBCASE("components are duplicated over two points") {
    const BaseChange bc = change_to(ex.t, {"s1", "s2"}, {0, 0});
    const CCMorphism p = pull_morphism(bc, ex.u);
    REQUIRE(p.corr().apex()->labels() == std::vector<std::string>{"(g,s1)", "(g,s2)"});
    CHECK(p.corr().left.graph() == std::vector<std::size_t>{0, 1});
    CHECK(p.corr().right.graph() == std::vector<std::size_t>{0, 1});
    CHECK(p.map(0).component(0) == Matrix::from_rows(Z, {{3}}));
    CHECK(p.map(1).component(1) == Matrix::from_rows(Z, {{3}}));
    CHECK(cc_validate(p).ok);
  }
  SUBCASE("points of T outside the image of g drop out") {
    const BaseRef t2 = make_base({"t0", "t1"});
    const SetRef y = make_set(t2, {"y0", "y1"}, {0, 1});
    const CCObject a{Sheaf(Z, y, {q_cx(), share(Complex::unit(Z))})};
    const BaseChange bc = change_to(t2, {"s"}, {1});
    const CCMorphism p = pull_morphism(bc, CCMorphism::identity(a));
    REQUIRE(p.corr().apex()->size() == 1);
    CHECK(*p.source().sheaf.stalk(0) == Complex::unit(Z));
  }
}

TEST_CASE("constraints") {
  PointExample ex;
  const BaseChange bc = change_to(ex.t, {"s1", "s2"}, {0, 0});
  const CCMorphism t = tensor_constraint(bc, ex.a, ex.a);
  CHECK(t.source().space()->labels() == std::vector<std::string>{"((y,y),s1)", "((y,y),s2)"});
  CHECK(t.target().space()->labels() == std::vector<std::string>{"((y,s1),(y,s1))", "((y,s2),(y,s2))"});
  CHECK(cc_validate(t).ok);
  const CCMorphism u = unit_constraint(bc, Z);
  CHECK(u.corr().right.graph() == std::vector<std::size_t>{0, 1});
  CHECK(u.target() == CCObject::unit(Z, bc.source_base()));
}

TEST_CASE("functor_preserves examples") {
  PointExample ex;
  const DualityData dx = make_dual(ex.a);
  SUBCASE("identity base change") {
    const BaseChangeCertificate c = functor_preserves(identity_change(ex.t), dx, ex.u, ex.v);
    CHECK(c.verdict.ok);
  }
  SUBCASE("pairing values are duplicated over two points") {
    const BaseChange bc = change_to(ex.t, {"s1", "s2"}, {0, 0});
    const BaseChangeCertificate c = functor_preserves(bc, dx, ex.u, ex.v);
    CHECK_MESSAGE(c.verdict.ok, c.verdict.detail);
    // alternating trace of x3 on Q: 3 - 3
    const Scalar local = oracle::pair_term(ex.u.map(0), ex.v.map(0));
    CHECK(local == 0);
    CHECK(c.pulled_pairing.values == std::vector<Scalar>{local, local});
    CHECK(c.pairing_of_pulled.values == std::vector<Scalar>{local, local});
  }
  SUBCASE("characteristic class over two points") {
    const BaseChange bc = change_to(ex.t, {"s1", "s2"}, {0, 0});
    const CCObject p = pull_object(bc, ex.a);
    const OmegaClass cc = characteristic_class(make_dual(p));
    CHECK(cc.values == std::vector<Scalar>{0, 0});
    CHECK(cc == pull_class(bc, characteristic_class(dx)));
  }
  SUBCASE("empty S") {
    const BaseChangeCertificate c = functor_preserves(change_to(ex.t, {}, {}), dx, ex.u, ex.v);
    CHECK(c.verdict.ok);
    CHECK(c.pairing_of_pulled.values.empty());
  }
}

TEST_CASE("push square examples") {
  // two points over one, pulled to two points
  const BaseRef t = make_base({"t"});
  const SetRef x = make_set(t, {"a", "b"}, {0, 0});
  const SetRef xp = make_set(t, {"p"}, {0});
  const OverMap f(x, xp, {0, 0});
  const CCObject a{Sheaf(Z, x, {q_cx(), share(Complex::free(Z, 0, 2))})};
  const CCMorphism id = CCMorphism::identity(a);
  const PushDiagram d{f, f, f, id.corr(), Span::identity(xp)};
  const BaseChange bc = change_to(t, {"s1", "s2"}, {0, 0});
  CHECK(pull_push_square(bc, d, id).ok);
  const CCMorphism pushed = pull_morphism(bc, shriek_push(d, id));
  REQUIRE(pushed.corr().apex()->size() == 2);
  CHECK(pushed.map(0).component(0) == Matrix::identity(Z, 3));
}

TEST_CASE("base change on random diagrams") {
  Rng rng(303);
  for (std::size_t trial = 0; trial < 40; ++trial) {
    const LVDiagram d = random_lv_diagram(rng, small_params(trial));
    const BaseChange bc(random_base_change(rng, d.u.source().base(), 3));
    INFO("trial " << trial);
    CHECK(pull_push_square(bc, d.c_square(), d.u).ok);
    CHECK(pull_push_square(bc, d.d_square(), d.v).ok);
    CHECK(pull_preserves_compose(bc, d.u, d.v).ok);
    CHECK(pull_preserves_tensor(bc, d.u, d.v).ok);
    const CCMorphism pu = pull_morphism(bc, d.u);
    CHECK(cc_validate(pu).ok);

    const DualityData dx = make_dual(d.u.source());
    const BaseChangeCertificate c = functor_preserves(bc, dx, d.u, d.v);
    CHECK_MESSAGE(c.verdict.ok, c.verdict.detail);
    // values on the pulled locus against the oracle
    const PairingResult above = pairing(pu, pull_morphism(bc, d.v), make_dual(pull_object(bc, d.u.source())));
    const CCMorphism pv = pull_morphism(bc, d.v);
    for (std::size_t k = 0; k < above.locus.apex->size(); ++k)
      CHECK(above.omega.values[k] == oracle::pair_term(pu.map(above.locus.first(k)), pv.map(above.locus.second(k))));
  }
}

TEST_CASE("base change commutes with the lower row of a diagram") {
  Rng rng(404);
  for (std::size_t trial = 0; trial < 20; ++trial) {
    const LVDiagram d = random_lv_diagram(rng, small_params(trial));
    const BaseChange bc(random_base_change(rng, d.u.source().base(), 3));
    const LVDiagram pd{pull_map(bc, d.f),          pull_map(bc, d.g),          pull_map(bc, d.p),
                       pull_map(bc, d.q),          pull_span(bc, d.lower_c),   pull_span(bc, d.lower_d),
                       pull_morphism(bc, d.u),     pull_morphism(bc, d.v)};
    REQUIRE(lv_diagram_check(pd).ok);
    const LVResult below = pairing_functorial(d);
    const LVResult above = pairing_functorial(pd);
    CHECK(above.verdict.ok);
    // same multiset of values; the carriers differ by recoordination
    auto a = above.rhs.values, b = pull_class(bc, below.rhs).values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}
