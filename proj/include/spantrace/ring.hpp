#pragma once

#include <cstdint>
#include <string>

namespace spantrace {

using Scalar = std::int64_t;

/// Coefficient ring: modulus 0 is the integers, m > 0 is Z/m.
/// Residues are kept in [0, m). Integer arithmetic is overflow-checked.
class Ring {
 public:
  constexpr Ring() = default;
  explicit Ring(std::int64_t modulus);

  static Ring integers() { return Ring(0); }

  std::int64_t modulus() const noexcept { return modulus_; }
  bool is_integers() const noexcept { return modulus_ == 0; }

  Scalar normalize(Scalar v) const noexcept;
  Scalar add(Scalar a, Scalar b) const;
  Scalar sub(Scalar a, Scalar b) const;
  Scalar mul(Scalar a, Scalar b) const;
  Scalar neg(Scalar a) const { return sub(0, a); }

  /// Multiplicative inverse, if a is a unit.
  bool invert(Scalar a, Scalar& out) const;

  std::string name() const;

  friend bool operator==(const Ring&, const Ring&) = default;

 private:
  std::int64_t modulus_ = 0;
};

/// (-1)^n for any integer n.
constexpr Scalar sign_pow(long n) noexcept { return (n % 2 == 0) ? 1 : -1; }

}  // namespace spantrace
