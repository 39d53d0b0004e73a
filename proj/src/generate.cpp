#include "spantrace/generate.hpp"

namespace spantrace {

Scalar draw(Rng& rng, Scalar lo, Scalar hi) { return std::uniform_int_distribution<Scalar>(lo, hi)(rng); }

std::size_t NormalComplex::homology(Degree n) const {
  auto at = [](const std::map<Degree, std::size_t>& m, Degree k) {
    auto it = m.find(k);
    return it == m.end() ? std::size_t{0} : it->second;
  };
  return complex->rank(n) - at(boundary, n) - at(source, n);
}

Matrix random_matrix(Rng& rng, Ring ring, std::size_t rows, std::size_t cols, Scalar bound) {
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, draw(rng, -bound, bound));
  return m;
}

namespace {

/// Unit lower times unit upper triangular, with its inverse.
std::pair<Matrix, Matrix> random_unimodular(Rng& rng, Ring ring, std::size_t n) {
  Matrix lo = Matrix::identity(ring, n), up = Matrix::identity(ring, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i > j) lo.set(i, j, draw(rng, -1, 1));
      if (i < j) up.set(i, j, draw(rng, -1, 1));
    }
  Matrix p = mat_mul(lo, up);
  auto inv = mat_inverse(p);
  if (!inv) throw Error("random_unimodular: not invertible");
  return {std::move(p), std::move(*inv)};
}

}  // namespace

NormalComplex random_normal_complex(Rng& rng, Ring ring, std::size_t max_rank, Degree lo, Degree hi) {
  NormalComplex out;
  std::map<Degree, std::size_t> ranks;
  for (Degree n = lo; n <= hi; ++n) ranks[n] = static_cast<std::size_t>(draw(rng, 0, static_cast<Scalar>(max_rank)));
  for (Degree n = lo; n <= hi; ++n) {
    const std::size_t free = ranks[n] - out.boundary[n];
    const std::size_t cap = n < hi ? std::min(free, ranks[n + 1]) : 0;
    out.source[n] = static_cast<std::size_t>(draw(rng, 0, static_cast<Scalar>(cap)));
    out.boundary[n + 1] = out.source[n];
  }
  for (Degree n = lo; n <= hi; ++n) {
    auto [p, pinv] = random_unimodular(rng, ring, ranks[n]);
    out.basis.emplace(n, std::move(p));
    out.basis_inverse.emplace(n, std::move(pinv));
  }
  std::map<Degree, Matrix> diffs;
  for (Degree n = lo; n < hi; ++n) {
    Matrix d(ring, ranks[n + 1], ranks[n]);
    for (std::size_t k = 0; k < out.source[n]; ++k) {
      Scalar lambda = draw(rng, 1, 3);
      if (ring.normalize(lambda) == 0) lambda = 1;
      d.set(k, ranks[n] - out.source[n] + k, lambda);
    }
    diffs.emplace(n, mat_mul(out.basis.at(n + 1), mat_mul(d, out.basis_inverse.at(n))));
  }
  out.complex = share(Complex(ring, ranks, diffs));
  return out;
}

Homotopy random_homotopy(Rng& rng, const Complex& source, const Complex& target) {
  Homotopy h;
  for (auto [n, r] : source.ranks())
    if (target.rank(n - 1) > 0) h.components.emplace(n, random_matrix(rng, source.ring(), target.rank(n - 1), r, 2));
  return h;
}

ChainMap random_chain_map(Rng& rng, const NormalComplex& source, const NormalComplex& target) {
  const Complex& l = *source.complex;
  const Complex& m = *target.complex;
  const Ring ring = l.ring();
  std::map<Degree, Matrix> comps;
  for (auto [n, r] : l.ranks()) {
    const std::size_t rm = m.rank(n);
    if (rm == 0) continue;
    Matrix f(ring, rm, r);
    const std::size_t col0 = source.boundary.count(n) ? source.boundary.at(n) : 0;
    const std::size_t cycles = rm - (target.source.count(n) ? target.source.at(n) : 0);
    for (std::size_t c = 0; c < source.homology(n); ++c)
      for (std::size_t row = 0; row < cycles; ++row) f.set(row, col0 + c, draw(rng, -2, 2));
    comps.emplace(n, mat_mul(target.basis.at(n), mat_mul(f, source.basis_inverse.at(n))));
  }
  ChainMap e(source.complex, target.complex, std::move(comps));
  if (source.complex == target.complex || l == m) {
    ChainMap k = ChainMap::scalar(source.complex, draw(rng, -2, 2));
    e = map_add(e, ChainMap(source.complex, target.complex, k.components()));
  }
  return homotopy_perturb(e, random_homotopy(rng, l, m));
}

}  // namespace spantrace
