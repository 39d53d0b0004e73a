#pragma once

#include <cstdint>
#include <map>
#include <random>

#include "spantrace/complex.hpp"

namespace spantrace {

using Rng = std::mt19937_64;

Scalar draw(Rng& rng, Scalar lo, Scalar hi);

/// Random complex together with its normal form: in the basis `basis`, every
/// degree splits as boundaries | homology | sources, and the k-th source of
/// degree n maps to lambda times the k-th boundary of degree n + 1.
struct NormalComplex {
  ComplexRef complex;
  std::map<Degree, std::size_t> boundary;
  std::map<Degree, std::size_t> source;
  std::map<Degree, Matrix> basis;
  std::map<Degree, Matrix> basis_inverse;

  std::size_t homology(Degree n) const;
};

/// Ranks drawn from [0, max_rank] in degrees [lo, hi], conjugated by random
/// unimodular changes of basis.
NormalComplex random_normal_complex(Rng& rng, Ring ring, std::size_t max_rank, Degree lo, Degree hi);

Matrix random_matrix(Rng& rng, Ring ring, std::size_t rows, std::size_t cols, Scalar bound = 3);

/// Degree -1 family of random matrices.
Homotopy random_homotopy(Rng& rng, const Complex& source, const Complex& target);

/// Random chain map: homology of the source sent to random cycles of the
/// target, plus k times the identity when source and target coincide, plus a
/// random null-homotopic term.
ChainMap random_chain_map(Rng& rng, const NormalComplex& source, const NormalComplex& target);

}  // namespace spantrace
