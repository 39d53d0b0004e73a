#pragma once

#include <map>
#include <memory>
#include <vector>

#include "spantrace/error.hpp"
#include "spantrace/matrix.hpp"

namespace spantrace {

using Degree = int;

/// Bounded complex of finite free modules, cohomological indexing:
/// diff(n) : C^n -> C^{n+1} has shape rank(n+1) x rank(n).
///
/// Zero ranks and zero differentials are not stored, so defaulted equality
/// is equality of complexes. d o d = 0 is checked by cx_validate, not by the
/// constructor (the constructor only enforces shapes).
class Complex {
 public:
  explicit Complex(Ring ring = Ring()) : ring_(ring) {}
  Complex(Ring ring, std::map<Degree, std::size_t> ranks, std::map<Degree, Matrix> diffs);

  /// The unit complex: rank one in degree zero.
  static Complex unit(Ring ring);
  static Complex free(Ring ring, Degree degree, std::size_t rank);

  Ring ring() const noexcept { return ring_; }
  std::size_t rank(Degree n) const;
  const std::map<Degree, std::size_t>& ranks() const noexcept { return ranks_; }
  const std::map<Degree, Matrix>& stored_diffs() const noexcept { return diffs_; }
  Matrix diff(Degree n) const;

  /// Degrees with nonzero rank, ascending.
  std::vector<Degree> degrees() const;
  std::size_t total_rank() const;
  bool is_zero() const noexcept { return ranks_.empty(); }

  /// Sum of (-1)^n rank(n), reduced into the ring.
  Scalar euler_characteristic() const;

  friend bool operator==(const Complex&, const Complex&) = default;

 private:
  Ring ring_;
  std::map<Degree, std::size_t> ranks_;
  std::map<Degree, Matrix> diffs_;
};

using ComplexRef = std::shared_ptr<const Complex>;

inline ComplexRef share(Complex c) { return std::make_shared<const Complex>(std::move(c)); }

/// Confirms shape coherence and d^{n+1} d^n = 0; reports the first failing degree.
Verdict cx_validate(const Complex& c);

/// (a (x) b)^n = sum over p + q = n of a^p (x) b^q, summands with p ascending,
/// Kronecker basis inside each summand, d(x (x) y) = dx (x) y + (-1)^p x (x) dy.
Complex cx_tensor(const Complex& a, const Complex& b);

/// cx_tensor through a per-thread cache keyed by content; equal inputs give
/// the same shared complex.
ComplexRef tensor_ref(const Complex& a, const Complex& b);

/// (a^v)^n = (a^{-n})^*, differential the transpose of d_a^{-n-1}.
Complex cx_dual(const Complex& a);

/// Degreewise direct sum, summands in the given order.
Complex cx_sum(const std::vector<ComplexRef>& parts);

/// Row/column offset of the summand a^p (x) b^{n-p} inside (a (x) b)^n.
std::size_t tensor_offset(const Complex& a, const Complex& b, Degree n, Degree p);

/// Sign of the evaluation pairing on degree-k elements: (-1)^{k(k-1)/2}.
Scalar pairing_sign(Degree k);

/// Degree-zero chain map between complexes. Components are stored only where
/// nonzero; component(n) has shape target.rank(n) x source.rank(n).
class ChainMap {
 public:
  ChainMap(ComplexRef source, ComplexRef target, std::map<Degree, Matrix> components = {});

  static ChainMap identity(ComplexRef c);
  static ChainMap zero(ComplexRef source, ComplexRef target);
  /// Multiplication by k on every degree.
  static ChainMap scalar(ComplexRef c, Scalar k);

  const Complex& source() const noexcept { return *source_; }
  const Complex& target() const noexcept { return *target_; }
  const ComplexRef& source_ref() const noexcept { return source_; }
  const ComplexRef& target_ref() const noexcept { return target_; }
  Ring ring() const noexcept { return source_->ring(); }

  Matrix component(Degree n) const;
  const std::map<Degree, Matrix>& components() const noexcept { return components_; }
  bool is_endomorphism() const { return *source_ == *target_; }

  friend bool operator==(const ChainMap& a, const ChainMap& b);

 private:
  ComplexRef source_;
  ComplexRef target_;
  std::map<Degree, Matrix> components_;
};

/// Confirms d_target f = f d_source in every degree.
Verdict chain_map_check(const ChainMap& f);

/// g o f.
ChainMap map_compose(const ChainMap& g, const ChainMap& f);
ChainMap map_add(const ChainMap& a, const ChainMap& b);
ChainMap map_scale(const ChainMap& a, Scalar k);
/// Components sum over p + q = n of f^p (x) g^q, in cx_tensor summand order.
ChainMap map_tensor(const ChainMap& f, const ChainMap& g);
/// f^v : target^v -> source^v, component n is (f^{-n})^T.
ChainMap map_dual(const ChainMap& f);

/// Sum over n of (-1)^n tr(e^n).
Scalar alt_trace(const ChainMap& e);

/// a (x) b -> b (x) a, x (x) y |-> (-1)^{|x||y|} y (x) x.
ChainMap koszul_swap(const ComplexRef& a, const ComplexRef& b);
/// (a (x) b) (x) c -> a (x) (b (x) c); a permutation matrix in every degree.
ChainMap tensor_associator(const ComplexRef& a, const ComplexRef& b, const ComplexRef& c);
/// Inverse of a chain map whose components are permutation matrices.
ChainMap permutation_inverse(const ChainMap& f);

/// c^v (x) c -> unit, phi (x) x |-> pairing_sign(|x|) phi(x).
ChainMap evaluation(const ComplexRef& c);
/// unit -> c (x) c^v, 1 |-> sum_k pairing_sign(k) sum_i e_i (x) e_i^*.
ChainMap coevaluation(const ComplexRef& c);

/// Canonical inclusion of parts[index] into cx_sum(parts) (and the projection back).
ChainMap sum_inclusion(const std::vector<ComplexRef>& parts, std::size_t index, const ComplexRef& sum);
ChainMap sum_projection(const std::vector<ComplexRef>& parts, std::size_t index, const ComplexRef& sum);

/// Tensor-hom currying. curry: (l (x) m -> n) to (l -> m^v (x) n); uncurry is its inverse.
ChainMap curry(const ChainMap& u, const ComplexRef& l, const ComplexRef& m);
ChainMap uncurry(const ChainMap& w, const ComplexRef& l, const ComplexRef& m, const ComplexRef& n);

/// Degree -1 map family: h^n : C^n -> D^{n-1}, shape target.rank(n-1) x source.rank(n).
struct Homotopy {
  std::map<Degree, Matrix> components;
};

/// e + d h + h d. The alternating trace is unchanged for endomorphisms.
ChainMap homotopy_perturb(const ChainMap& e, const Homotopy& h);

}  // namespace spantrace
