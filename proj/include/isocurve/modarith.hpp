#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace isocurve {

using Int = std::int64_t;

/// Raised on modulus mismatches, non-invertible inputs and similar misuse.
class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_prime(Int n);

/// Modulus of the form ell^exponent with ell prime.
///
/// Exponent 0 is the degenerate "level 1" modulus; arithmetic mod 1 maps
/// everything to zero.
class PrimePowerModulus {
 public:
  // Largest supported modulus; keeps products of two residues below 2^63.
  static constexpr Int kMaxValue = Int{1} << 31;

  PrimePowerModulus(Int ell, int exponent);

  static PrimePowerModulus level_one(Int ell) { return {ell, 0}; }

  Int ell() const { return ell_; }
  int exponent() const { return exponent_; }
  Int value() const { return value_; }
  bool is_level_one() const { return exponent_ == 0; }

  PrimePowerModulus with_exponent(int e) const { return {ell_, e}; }

  /// True when this modulus divides `other` (same prime, smaller exponent).
  bool divides(const PrimePowerModulus& other) const {
    return ell_ == other.ell_ && exponent_ <= other.exponent_;
  }

  Int reduce(Int x) const {
    Int r = x % value_;
    return r < 0 ? r + value_ : r;
  }
  Int mul(Int a, Int b) const { return reduce(a * b); }
  bool is_unit(Int x) const { return exponent_ == 0 || reduce(x) % ell_ != 0; }
  Int inverse(Int x) const;
  Int pow(Int base, Int e) const;

  /// Multiplicative order of a unit.
  Int unit_order(Int x) const;
  /// Euler phi of the modulus.
  Int unit_count() const {
    return exponent_ == 0 ? 1 : value_ / ell_ * (ell_ - 1);
  }

  std::string to_string() const;

  friend bool operator==(const PrimePowerModulus&, const PrimePowerModulus&) = default;
  friend auto operator<=>(const PrimePowerModulus&, const PrimePowerModulus&) = default;

 private:
  Int ell_;
  int exponent_;
  Int value_;
};

/// 2x2 matrix [m11 m12; m21 m22] with canonical entries in [0, modulus).
class ResidueMatrix {
 public:
  using Entries = std::array<Int, 4>;

  ResidueMatrix(const PrimePowerModulus& modulus, Int m11, Int m12, Int m21,
                Int m22);
  ResidueMatrix(const PrimePowerModulus& modulus, const Entries& e)
      : ResidueMatrix(modulus, e[0], e[1], e[2], e[3]) {}

  static ResidueMatrix identity(const PrimePowerModulus& modulus) {
    return {modulus, 1, 0, 0, 1};
  }
  static ResidueMatrix scalar(const PrimePowerModulus& modulus, Int s) {
    return {modulus, s, 0, 0, s};
  }

  const PrimePowerModulus& modulus() const { return modulus_; }
  const Entries& entries() const { return e_; }
  Int operator[](int i) const { return e_[i]; }
  Int m11() const { return e_[0]; }
  Int m12() const { return e_[1]; }
  Int m21() const { return e_[2]; }
  Int m22() const { return e_[3]; }

  Int det() const;
  Int trace() const { return modulus_.reduce(e_[0] + e_[3]); }
  bool is_invertible() const { return modulus_.is_unit(det()); }
  bool is_identity() const;

  /// Packed 16-bit-per-entry key; order agrees with lexicographic entries.
  std::uint64_t key() const;
  static ResidueMatrix from_key(const PrimePowerModulus& modulus, std::uint64_t key);

  friend bool operator==(const ResidueMatrix& a, const ResidueMatrix& b) {
    return a.modulus_ == b.modulus_ && a.e_ == b.e_;
  }
  friend auto operator<=>(const ResidueMatrix& a, const ResidueMatrix& b) {
    if (auto c = a.modulus_ <=> b.modulus_; c != 0) return c;
    return a.e_ <=> b.e_;
  }

 private:
  PrimePowerModulus modulus_;
  Entries e_;
};

std::ostream& operator<<(std::ostream& os, const ResidueMatrix& m);

ResidueMatrix mat_mul(const ResidueMatrix& a, const ResidueMatrix& b);
Int mat_det(const ResidueMatrix& a);
ResidueMatrix mat_inv(const ResidueMatrix& a);
ResidueMatrix mat_pow(const ResidueMatrix& a, Int e);
Int mat_order(const ResidueMatrix& a);
ResidueMatrix reduce_matrix(const ResidueMatrix& a, const PrimePowerModulus& target);

inline ResidueMatrix operator*(const ResidueMatrix& a, const ResidueMatrix& b) {
  return mat_mul(a, b);
}

/// Order of GL2(Z/ell^n) (or SL2 with `special`), n >= 1.
Int gl2_order(const PrimePowerModulus& m);
Int sl2_order(const PrimePowerModulus& m);

/// Smallest quadratic non-residue mod an odd prime.
Int smallest_nonresidue(Int ell);
bool is_quadratic_residue(Int x, Int ell);

// Packed-key helpers used by the enumeration hot loops. Entries must be
// below 2^16, which holds for every modulus we enumerate.
namespace packed {

inline std::uint64_t pack(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                          std::uint64_t d) {
  return (a << 48) | (b << 32) | (c << 16) | d;
}
inline std::uint64_t entry(std::uint64_t key, int i) {
  return (key >> (48 - 16 * i)) & 0xffffu;
}
inline std::uint64_t mul(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
  const std::uint64_t a = entry(x, 0), b = entry(x, 1), c = entry(x, 2), d = entry(x, 3);
  const std::uint64_t e = entry(y, 0), f = entry(y, 1), g = entry(y, 2), h = entry(y, 3);
  return pack((a * e + b * g) % m, (a * f + b * h) % m, (c * e + d * g) % m,
              (c * f + d * h) % m);
}
inline std::uint64_t det(std::uint64_t x, std::uint64_t m) {
  return (entry(x, 0) * entry(x, 3) + m * m - entry(x, 1) * entry(x, 2) % (m * m)) % m;
}
inline std::uint64_t negate(std::uint64_t x, std::uint64_t m) {
  auto n = [m](std::uint64_t v) { return v == 0 ? 0 : m - v; };
  return pack(n(entry(x, 0)), n(entry(x, 1)), n(entry(x, 2)), n(entry(x, 3)));
}
inline std::uint64_t reduce(std::uint64_t x, std::uint64_t m) {
  return pack(entry(x, 0) % m, entry(x, 1) % m, entry(x, 2) % m, entry(x, 3) % m);
}
/// Dense index in [0, m^4) for bitmap-backed sets.
inline std::uint64_t dense(std::uint64_t x, std::uint64_t m) {
  return ((entry(x, 0) * m + entry(x, 1)) * m + entry(x, 2)) * m + entry(x, 3);
}
constexpr std::uint64_t kIdentity = (std::uint64_t{1} << 48) | 1u;

}  // namespace packed

/// Largest modulus whose matrices fit the packed representation.
inline constexpr Int kMaxPackedModulus = 1 << 16;

}  // namespace isocurve
