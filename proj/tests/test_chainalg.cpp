#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracle.hpp"
#include "support.hpp"

using namespace spantrace;

namespace {

const Ring Z = Ring::integers();
const Ring Z7(7);

/// 0 -> L --2--> L -> 0 in degrees 0, 1.
Complex two_term(Ring ring) {
  return Complex(ring, {{0, 1}, {1, 1}}, {{0, Matrix::from_rows(ring, {{2}})}});
}

}  // namespace

TEST_CASE("mat_mul examples") {
  CHECK(mat_mul(Matrix::from_rows(Z, {{2}}), Matrix::from_rows(Z, {{3}})) == Matrix::from_rows(Z, {{6}}));
  const Matrix a = Matrix::from_rows(Z, {{4, -1}, {2, 9}});
  CHECK(mat_mul(Matrix::identity(Z, 2), a) == a);

  const Matrix p = Matrix::from_rows(Z7, {{3, 1}, {0, 2}});
  const Matrix q = Matrix::from_rows(Z7, {{1}, {5}});
  const auto expected = oracle::scalar_loop_mul(Z7, p.to_rows(), q.to_rows());
  CHECK(expected == std::vector<std::vector<Scalar>>{{1}, {3}});
  CHECK(mat_mul(p, q) == Matrix::from_rows(Z7, expected));
}

TEST_CASE("mat_mul errors") {
  CHECK_THROWS_AS(mat_mul(Matrix(Z, 2, 3), Matrix(Z, 2, 3)), Error);
  CHECK_THROWS_AS(mat_mul(Matrix(Z, 1, 1), Matrix(Z7, 1, 1)), Error);
}

TEST_CASE("mat_trace and mat_kron") {
  CHECK(mat_trace(Matrix::from_rows(Z, {{5}})) == 5);
  CHECK(mat_trace(Matrix::identity(Z, 4)) == 4);
  CHECK(mat_trace(Matrix::from_rows(Z, {{1, 2}, {3, 4}})) == 5);
  CHECK_THROWS_AS(mat_trace(Matrix(Z, 1, 2)), Error);

  CHECK(mat_kron(Matrix::from_rows(Z, {{2}}), Matrix::from_rows(Z, {{3}})) == Matrix::from_rows(Z, {{6}}));
  CHECK(mat_kron(Matrix::identity(Z, 2), Matrix::identity(Z, 3)) == Matrix::identity(Z, 6));
  // unfolded by hand: block (i,j) is a(i,j) * [[2]]
  CHECK(mat_kron(Matrix::from_rows(Z, {{0, 1}, {1, 0}}), Matrix::from_rows(Z, {{2}})) ==
        Matrix::from_rows(Z, {{0, 2}, {2, 0}}));
}

TEST_CASE("trace identities on random matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Ring ring = trial % 2 ? Z7 : Z;
    const std::size_t n = support::draw(rng, 0, 4), m = support::draw(rng, 0, 4);
    const Matrix a = support::random_matrix(rng, ring, n, m);
    const Matrix b = support::random_matrix(rng, ring, m, n);
    CHECK(mat_trace(mat_mul(a, b)) == mat_trace(mat_mul(b, a)));
    const Matrix s = support::random_matrix(rng, ring, n, n);
    const Matrix t = support::random_matrix(rng, ring, m, m);
    CHECK(mat_trace(mat_kron(s, t)) == ring.mul(mat_trace(s), mat_trace(t)));
  }
}

TEST_CASE("mat_inverse") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto [p, pinv] = support::random_unimodular(rng, Z, 4);
    CHECK(mat_mul(p, pinv) == Matrix::identity(Z, 4));
  }
  CHECK_FALSE(mat_inverse(Matrix::from_rows(Z, {{2}})).has_value());
  CHECK(*mat_inverse(Matrix::from_rows(Z7, {{2}})) == Matrix::from_rows(Z7, {{4}}));
}

TEST_CASE("cx_validate") {
  CHECK(cx_validate(Complex(Z)).ok);
  CHECK(cx_validate(two_term(Z)).ok);
  const Complex bad(Z, {{0, 1}, {1, 1}, {2, 1}},
                    {{0, Matrix::from_rows(Z, {{1}})}, {1, Matrix::from_rows(Z, {{1}})}});
  const Verdict v = cx_validate(bad);
  CHECK_FALSE(v.ok);
  CHECK(v.detail.find("degree 0") != std::string::npos);
  CHECK_THROWS_AS(Complex(Z, {{0, 1}}, {{0, Matrix(Z, 2, 1)}}), Error);
}

TEST_CASE("cx_tensor examples") {
  const Complex unit = Complex::unit(Z);
  CHECK(cx_tensor(unit, unit) == unit);
  const Complex q = two_term(Z);
  CHECK(cx_tensor(q, unit) == q);
  CHECK(cx_tensor(unit, q) == q);

  const Complex qq = cx_tensor(q, q);
  CHECK(qq.ranks() == std::map<Degree, std::size_t>{{0, 1}, {1, 2}, {2, 1}});
  // Basis enumeration: summand order (0,1) then (1,0).
  const Matrix d0 = oracle::tensor_differential(q, q, 0);
  const Matrix d1 = oracle::tensor_differential(q, q, 1);
  CHECK(d0 == Matrix::from_rows(Z, {{2}, {2}}));
  CHECK(d1 == Matrix::from_rows(Z, {{2, -2}}));
  CHECK(qq.diff(0) == d0);
  CHECK(qq.diff(1) == d1);
  CHECK(cx_validate(qq).ok);
}

TEST_CASE("cx_tensor matches basis enumeration on random complexes") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Ring ring = trial % 2 ? Z7 : Z;
    const Complex a = support::random_complex(rng, ring, 2, -1, 1);
    const Complex b = support::random_complex(rng, ring, 2, -1, 2);
    const Complex t = cx_tensor(a, b);
    REQUIRE(cx_validate(a).ok);
    CHECK(cx_validate(t).ok);
    for (Degree n = -3; n <= 3; ++n) CHECK(t.diff(n) == oracle::tensor_differential(a, b, n));
    CHECK(cx_validate(cx_dual(t)).ok);
    CHECK(cx_validate(cx_sum({share(a), share(b), share(t)})).ok);
  }
}

TEST_CASE("cx_dual") {
  CHECK(cx_dual(Complex::unit(Z)) == Complex::unit(Z));
  CHECK(cx_dual(Complex::free(Z, 1, 1)) == Complex::free(Z, -1, 1));
  const Complex qd = cx_dual(two_term(Z));
  CHECK(qd.ranks() == std::map<Degree, std::size_t>{{-1, 1}, {0, 1}});
  CHECK(qd.diff(-1) == Matrix::from_rows(Z, {{2}}));

  // the evaluation pairing is a chain map for exactly this differential
  const ComplexRef q = share(two_term(Z));
  CHECK(chain_map_check(evaluation(q)).ok);
  CHECK(chain_map_check(coevaluation(q)).ok);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Complex c = support::random_complex(rng, trial % 2 ? Z7 : Z, 3, -2, 2);
    CHECK(cx_dual(cx_dual(c)) == c);
    const ComplexRef r = share(c);
    CHECK(chain_map_check(evaluation(r)).ok);
    CHECK(chain_map_check(coevaluation(r)).ok);
  }
}

TEST_CASE("alt_trace examples") {
  CHECK(alt_trace(ChainMap::identity(share(Complex::unit(Z)))) == 1);
  CHECK(alt_trace(ChainMap::identity(share(two_term(Z)))) == 0);
  const ComplexRef two = share(Complex::free(Z, 0, 2));
  CHECK(alt_trace(ChainMap(two, two, {{0, Matrix::from_rows(Z, {{3, 0}, {0, 1}})}})) == 4);
  CHECK_THROWS_AS(alt_trace(ChainMap::zero(two, share(Complex::unit(Z)))), Error);
}

TEST_CASE("map_tensor examples") {
  const ComplexRef unit = share(Complex::unit(Z));
  const ComplexRef q = share(two_term(Z));
  CHECK(map_tensor(ChainMap::identity(q), ChainMap::identity(q)) == ChainMap::identity(share(cx_tensor(*q, *q))));
  CHECK(map_tensor(ChainMap::scalar(unit, 2), ChainMap::scalar(unit, 3)) == ChainMap::scalar(unit, 6));
  const ChainMap t = map_tensor(ChainMap::scalar(unit, 2), ChainMap::identity(q));
  for (Degree n : {0, 1}) {
    CHECK(t.component(n) == oracle::tensor_map_component(ChainMap::scalar(unit, 2), ChainMap::identity(q), n));
    CHECK(t.component(n) == Matrix::from_rows(Z, {{2}}));
  }
  CHECK(chain_map_check(t).ok);
}

TEST_CASE("homotopy invariance of the alternating trace") {
  const ComplexRef single = share(Complex::free(Z, 0, 2));
  const ChainMap e(single, single, {{0, Matrix::from_rows(Z, {{1, 2}, {3, 4}})}});
  CHECK(homotopy_perturb(e, {}) == e);
  std::mt19937_64 rng(1);
  CHECK(homotopy_perturb(e, support::random_homotopy(rng, *single, *single)) == e);

  const ComplexRef q = share(two_term(Z));
  Homotopy h;
  h.components.emplace(1, Matrix::from_rows(Z, {{1}}));
  const ChainMap perturbed = homotopy_perturb(ChainMap::identity(q), h);
  CHECK_FALSE(perturbed == ChainMap::identity(q));
  CHECK(alt_trace(perturbed) == 0);

  for (int trial = 0; trial < 200; ++trial) {
    const Ring ring = trial % 2 ? Z7 : Z;
    const ComplexRef c = share(support::random_complex(rng, ring, 3, -2, 2));
    const ChainMap base = ChainMap::scalar(c, support::draw(rng, -3, 3));
    const ChainMap pert = homotopy_perturb(base, support::random_homotopy(rng, *c, *c));
    REQUIRE(chain_map_check(pert).ok);
    CHECK(alt_trace(pert) == alt_trace(base));
    CHECK(alt_trace(pert) == oracle::local_term(pert));
    CHECK(alt_trace(ChainMap::identity(c)) == c->euler_characteristic());

    // cyclicity of the trace for composable chain maps
    const ComplexRef d = share(support::random_complex(rng, ring, 2, -1, 1));
    const ChainMap f = homotopy_perturb(ChainMap::zero(c, d), support::random_homotopy(rng, *c, *d));
    const ChainMap g = homotopy_perturb(ChainMap::zero(d, c), support::random_homotopy(rng, *d, *c));
    CHECK(alt_trace(map_compose(g, f)) == alt_trace(map_compose(f, g)));
  }
}

TEST_CASE("structural chain maps") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const Ring ring = trial % 2 ? Z7 : Z;
    const ComplexRef a = share(support::random_complex(rng, ring, 2, -1, 1));
    const ComplexRef b = share(support::random_complex(rng, ring, 2, -1, 1));
    const ComplexRef c = share(support::random_complex(rng, ring, 2, 0, 1));
    const ChainMap sw = koszul_swap(a, b);
    CHECK(chain_map_check(sw).ok);
    CHECK(map_compose(koszul_swap(b, a), sw) == ChainMap::identity(sw.source_ref()));
    const ChainMap assoc = tensor_associator(a, b, c);
    CHECK(chain_map_check(assoc).ok);
    CHECK(map_compose(permutation_inverse(assoc), assoc) == ChainMap::identity(assoc.source_ref()));

    // triangle identities of ev/coev at the chain level
    const ComplexRef ad = share(cx_dual(*a));
    ChainMap t1 = map_tensor(coevaluation(a), ChainMap::identity(a));
    t1 = map_compose(tensor_associator(a, ad, a), t1);
    t1 = map_compose(map_tensor(ChainMap::identity(a), evaluation(a)), t1);
    CHECK(t1.components() == ChainMap::identity(a).components());
    ChainMap t2 = map_tensor(ChainMap::identity(ad), coevaluation(a));
    t2 = map_compose(permutation_inverse(tensor_associator(ad, a, ad)), t2);
    t2 = map_compose(map_tensor(evaluation(a), ChainMap::identity(ad)), t2);
    CHECK(t2.components() == ChainMap::identity(ad).components());

    // supertrace through the categorical composite
    const ChainMap e = homotopy_perturb(ChainMap::scalar(a, support::draw(rng, -2, 2)),
                                        support::random_homotopy(rng, *a, *a));
    ChainMap tr = map_compose(map_tensor(e, ChainMap::identity(ad)), coevaluation(a));
    tr = map_compose(koszul_swap(a, ad), tr);
    tr = map_compose(evaluation(a), tr);
    CHECK(tr.component(0)(0, 0) == alt_trace(e));

    // currying round trips
    const ComplexRef ab = share(cx_tensor(*a, *b));
    const ChainMap u = homotopy_perturb(ChainMap::zero(ab, c), support::random_homotopy(rng, *ab, *c));
    const ChainMap w = curry(u, a, b);
    CHECK(chain_map_check(w).ok);
    CHECK(uncurry(w, a, b, c) == u);
    const ComplexRef bdc = share(cx_tensor(cx_dual(*b), *c));
    const ChainMap w2 = homotopy_perturb(ChainMap::zero(a, bdc), support::random_homotopy(rng, *a, *bdc));
    CHECK(curry(uncurry(w2, a, b, c), a, b) == w2);

    // dual of a map is a chain map, and dualizing twice is the identity
    const ChainMap du = map_dual(u);
    CHECK(chain_map_check(du).ok);
    CHECK(map_dual(du) == u);
  }
}
