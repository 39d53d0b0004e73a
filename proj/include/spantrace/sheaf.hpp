#pragma once

#include <vector>

#include "spantrace/complex.hpp"
#include "spantrace/finspan.hpp"

namespace spantrace {

/// One complex per element of a finite set over the base. Stalks are shared
/// handles; operations that only move stalks around (pull) share them.
class Sheaf {
 public:
  Sheaf(Ring ring, SetRef carrier, std::vector<ComplexRef> stalks);

  /// Same stalk at every point.
  static Sheaf constant(Ring ring, SetRef carrier, const ComplexRef& stalk);
  /// The monoidal unit: the unit complex on the base.
  static Sheaf unit(Ring ring, const BaseRef& base);

  Ring ring() const noexcept { return ring_; }
  const SetRef& carrier() const noexcept { return carrier_; }
  const ComplexRef& stalk(std::size_t i) const { return stalks_.at(i); }
  const std::vector<ComplexRef>& stalks() const noexcept { return stalks_; }

  friend bool operator==(const Sheaf& a, const Sheaf& b);

 private:
  Ring ring_;
  SetRef carrier_;
  std::vector<ComplexRef> stalks_;
};

/// Every stalk passes cx_validate.
Verdict sheaf_validate(const Sheaf& l);

/// f^*: stalk at x is M at f(x).
Sheaf pull(const OverMap& f, const Sheaf& m);
/// f^! coincides with f^* for maps of finite sets.
Sheaf upper_shriek(const OverMap& f, const Sheaf& m);
/// f_! = f_*: stalk at y is the direct sum of L over the fiber, in carrier order.
Sheaf push(const OverMap& f, const Sheaf& l);
/// External tensor over the base; carrier is `over.apex` (must be X x_S Y).
Sheaf box(const Sheaf& l, const Sheaf& m, const FiberProduct& over);
Sheaf box(const Sheaf& l, const Sheaf& m);
/// Relative Verdier dual: stalkwise cx_dual.
Sheaf verdier(const Sheaf& l);
/// Internal hom on X x_S Y: stalk Hom(L_x, M_y) = L_x^v (x) M_y.
Sheaf sheaf_hom(const Sheaf& l, const Sheaf& m);

/// (A_1 + ... + A_k) (x) M -> (A_1 (x) M) + ... + (A_k (x) M). A permutation
/// in every degree; the identity when M or every part is concentrated in a
/// single degree. Compares push(f x id)(L box M) with push(f)(L) box M.
ChainMap sum_tensor_distributor(const std::vector<ComplexRef>& parts, const ComplexRef& m);

/// A degree-zero class on a finite set: one scalar per element.
struct OmegaClass {
  Ring ring;
  SetRef carrier;
  std::vector<Scalar> values;

  friend bool operator==(const OmegaClass& a, const OmegaClass& b);
};

/// Pushforward of classes: fiberwise sum.
OmegaClass omega_push(const OverMap& q, const OmegaClass& a);
/// Transport of a class along a bijection of carriers.
OmegaClass omega_transport(const OmegaClass& a, const SetRef& target, const std::vector<std::size_t>& image);

}  // namespace spantrace
