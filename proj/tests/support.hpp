#pragma once
// Small random generators for unit tests.

#include <random>

#include "spantrace/complex.hpp"

namespace support {

using namespace spantrace;

inline Scalar draw(std::mt19937_64& rng, Scalar lo, Scalar hi) {
  return std::uniform_int_distribution<Scalar>(lo, hi)(rng);
}

inline Matrix random_matrix(std::mt19937_64& rng, Ring ring, std::size_t r, std::size_t c) {
  Matrix m(ring, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, draw(rng, -3, 3));
  return m;
}

/// Unit lower times unit upper triangular: invertible over any ring.
inline std::pair<Matrix, Matrix> random_unimodular(std::mt19937_64& rng, Ring ring, std::size_t n) {
  Matrix lo = Matrix::identity(ring, n), up = Matrix::identity(ring, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i > j) lo.set(i, j, draw(rng, -1, 1));
      if (i < j) up.set(i, j, draw(rng, -1, 1));
    }
  Matrix p = mat_mul(lo, up);
  return {p, *mat_inverse(p)};
}

/// Random complex with d o d = 0: a normal form (boundary | homology | source
/// blocks, source mapping onto the next boundary by nonzero scalars)
/// conjugated by random unimodular matrices.
inline Complex random_complex(std::mt19937_64& rng, Ring ring, std::size_t max_rank, Degree lo, Degree hi) {
  std::map<Degree, std::size_t> ranks;
  for (Degree n = lo; n <= hi; ++n) ranks[n] = static_cast<std::size_t>(draw(rng, 0, static_cast<Scalar>(max_rank)));
  std::map<Degree, std::size_t> boundary;  // rank of image of d^{n-1} inside C^n
  std::map<Degree, std::size_t> source;    // rank of the part of C^n mapped by d^n
  for (Degree n = lo; n <= hi; ++n) {
    const std::size_t free = ranks[n] - boundary[n];
    const std::size_t cap = n < hi ? std::min(free, ranks[n + 1]) : 0;
    source[n] = static_cast<std::size_t>(draw(rng, 0, static_cast<Scalar>(cap)));
    boundary[n + 1] = source[n];
  }
  std::map<Degree, Matrix> change, change_inv;
  for (Degree n = lo; n <= hi; ++n) {
    auto [p, pinv] = random_unimodular(rng, ring, ranks[n]);
    change.emplace(n, p);
    change_inv.emplace(n, pinv);
  }
  std::map<Degree, Matrix> diffs;
  for (Degree n = lo; n < hi; ++n) {
    Matrix d(ring, ranks[n + 1], ranks[n]);
    const std::size_t s = source[n];
    for (std::size_t k = 0; k < s; ++k) {
      Scalar lambda = draw(rng, 1, 3);
      if (ring.normalize(lambda) == 0) lambda = 1;
      d.set(k, ranks[n] - s + k, lambda);
    }
    diffs.emplace(n, mat_mul(change.at(n + 1), mat_mul(d, change_inv.at(n))));
  }
  return Complex(ring, ranks, diffs);
}

inline Homotopy random_homotopy(std::mt19937_64& rng, const Complex& src, const Complex& tgt) {
  Homotopy h;
  for (auto [n, r] : src.ranks())
    if (tgt.rank(n - 1) > 0) h.components.emplace(n, random_matrix(rng, src.ring(), tgt.rank(n - 1), r));
  return h;
}

}  // namespace support
