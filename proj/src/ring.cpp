#include "spantrace/ring.hpp"

#include "spantrace/error.hpp"

namespace spantrace {

Ring::Ring(std::int64_t modulus) : modulus_(modulus) {
  if (modulus < 0) throw Error("ring modulus must be non-negative");
  if (modulus > (std::int64_t{1} << 31))
    throw Error("ring modulus too large for exact 64-bit products");
}

Scalar Ring::normalize(Scalar v) const noexcept {
  if (modulus_ == 0) return v;
  Scalar r = v % modulus_;
  return r < 0 ? r + modulus_ : r;
}

Scalar Ring::add(Scalar a, Scalar b) const {
  Scalar out;
  if (__builtin_add_overflow(a, b, &out)) throw Error("integer overflow in add");
  return normalize(out);
}

Scalar Ring::sub(Scalar a, Scalar b) const {
  Scalar out;
  if (__builtin_sub_overflow(a, b, &out)) throw Error("integer overflow in sub");
  return normalize(out);
}

Scalar Ring::mul(Scalar a, Scalar b) const {
  Scalar out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error("integer overflow in mul");
  return normalize(out);
}

bool Ring::invert(Scalar a, Scalar& out) const {
  a = normalize(a);
  if (modulus_ == 0) {
    if (a == 1 || a == -1) {
      out = a;
      return true;
    }
    return false;
  }
  // extended Euclid
  Scalar r0 = modulus_, r1 = a, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Scalar q = r0 / r1;
    Scalar r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    Scalar t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) return false;
  out = normalize(t0);
  return true;
}

std::string Ring::name() const {
  return modulus_ == 0 ? std::string("Z") : "Z/" + std::to_string(modulus_);
}

}  // namespace spantrace
