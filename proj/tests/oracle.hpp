#pragma once
// Test-only oracles. Nothing here calls the block/Kronecker code paths of the
// library; each routine recomputes its answer from basis elements.

#include <map>
#include <tuple>
#include <vector>

#include "spantrace/complex.hpp"

namespace oracle {

using spantrace::Complex;
using spantrace::Degree;
using spantrace::Matrix;
using spantrace::Ring;
using spantrace::Scalar;

inline std::vector<std::vector<Scalar>> scalar_loop_mul(Ring ring, const std::vector<std::vector<Scalar>>& a,
                                                        const std::vector<std::vector<Scalar>>& b) {
  std::vector<std::vector<Scalar>> out(a.size(), std::vector<Scalar>(b.empty() ? 0 : b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < out[i].size(); ++j) {
      Scalar acc = 0;
      for (std::size_t k = 0; k < b.size(); ++k) acc += a[i][k] * b[k][j];
      out[i][j] = ring.normalize(acc);
    }
  return out;
}

/// Basis element of a (x) b: (p, i, q, j) means e_i of a^p tensor f_j of b^q.
using TensorBasis = std::tuple<Degree, std::size_t, Degree, std::size_t>;

/// Enumerates the basis of (a (x) b)^n in the documented order: p ascending, then
/// i, then j.
inline std::vector<TensorBasis> tensor_basis(const Complex& a, const Complex& b, Degree n) {
  std::vector<TensorBasis> out;
  for (Degree p = -64; p <= 64; ++p) {
    const std::size_t ra = a.rank(p), rb = b.rank(n - p);
    for (std::size_t i = 0; i < ra; ++i)
      for (std::size_t j = 0; j < rb; ++j) out.emplace_back(p, i, n - p, j);
  }
  return out;
}

/// Differential of a (x) b in degree n computed elementwise from
/// d(x (x) y) = dx (x) y + (-1)^p x (x) dy.
inline Matrix tensor_differential(const Complex& a, const Complex& b, Degree n) {
  const Ring ring = a.ring();
  auto src = tensor_basis(a, b, n);
  auto tgt = tensor_basis(a, b, n + 1);
  std::map<TensorBasis, std::size_t> index;
  for (std::size_t k = 0; k < tgt.size(); ++k) index[tgt[k]] = k;
  Matrix d(ring, tgt.size(), src.size());
  for (std::size_t col = 0; col < src.size(); ++col) {
    auto [p, i, q, j] = src[col];
    const Matrix da = a.diff(p);
    for (std::size_t k = 0; k < da.rows(); ++k)
      if (da(k, i) != 0) d.accumulate(index.at({p + 1, k, q, j}), col, da(k, i));
    const Matrix db = b.diff(q);
    const Scalar sign = (p % 2 == 0) ? 1 : -1;
    for (std::size_t l = 0; l < db.rows(); ++l)
      if (db(l, j) != 0) d.accumulate(index.at({p, i, q + 1, l}), col, sign * db(l, j));
  }
  return d;
}

/// Component of f (x) g in degree n from basis elements.
inline Matrix tensor_map_component(const spantrace::ChainMap& f, const spantrace::ChainMap& g, Degree n) {
  const Ring ring = f.ring();
  auto src = tensor_basis(f.source(), g.source(), n);
  auto tgt = tensor_basis(f.target(), g.target(), n);
  std::map<TensorBasis, std::size_t> index;
  for (std::size_t k = 0; k < tgt.size(); ++k) index[tgt[k]] = k;
  Matrix out(ring, tgt.size(), src.size());
  for (std::size_t col = 0; col < src.size(); ++col) {
    auto [p, i, q, j] = src[col];
    const Matrix fp = f.component(p), gq = g.component(q);
    for (std::size_t k = 0; k < fp.rows(); ++k)
      for (std::size_t l = 0; l < gq.rows(); ++l) {
        const Scalar v = ring.mul(fp(k, i), gq(l, j));
        if (v != 0) out.accumulate(index.at({p, k, q, l}), col, v);
      }
  }
  return out;
}

/// Sum over n of (-1)^n times the trace of the n-th component, by diagonal walk.
inline Scalar local_term(const spantrace::ChainMap& e) {
  const Ring ring = e.ring();
  Scalar acc = 0;
  for (Degree n = -64; n <= 64; ++n) {
    const std::size_t r = e.source().rank(n);
    const Matrix m = e.component(n);
    for (std::size_t i = 0; i < r; ++i) acc += ((n % 2 == 0) ? 1 : -1) * m(i, i);
  }
  return ring.normalize(acc);
}

/// Local term of the pair (u, v): alternating diagonal sum of v o u, with the
/// product done by scalar loops.
inline Scalar pair_term(const spantrace::ChainMap& u, const spantrace::ChainMap& v) {
  const Ring ring = u.ring();
  Scalar acc = 0;
  for (Degree n = -64; n <= 64; ++n) {
    const std::size_t r = u.source().rank(n);
    if (r == 0 || u.target().rank(n) == 0) continue;
    const auto vu = scalar_loop_mul(ring, v.component(n).to_rows(), u.component(n).to_rows());
    for (std::size_t i = 0; i < r && i < vu.size(); ++i) acc += ((n % 2 == 0) ? 1 : -1) * vu[i][i];
  }
  return ring.normalize(acc);
}

}  // namespace oracle
