#include "isocurve/modarith.hpp"

#include <tuple>
#include <utility>

#include <numeric>
#include <ostream>
#include <sstream>

namespace isocurve {

bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimePowerModulus::PrimePowerModulus(Int ell, int exponent)
    : ell_(ell), exponent_(exponent), value_(1) {
  if (!is_prime(ell)) throw ArithmeticError("modulus base " + std::to_string(ell) + " is not prime");
  if (exponent < 0) throw ArithmeticError("negative modulus exponent");
  for (int i = 0; i < exponent; ++i) {
    value_ *= ell;
    if (value_ > kMaxValue) throw ArithmeticError("modulus " + std::to_string(ell) + "^" +
                                                  std::to_string(exponent) + " is too large");
  }
}

Int PrimePowerModulus::inverse(Int x) const {
  if (exponent_ == 0) return 0;
  Int a = reduce(x), m = value_;
  Int t0 = 0, t1 = 1, r0 = m, r1 = a;
  while (r1 != 0) {
    Int q = r0 / r1;
    std::tie(t0, t1) = std::pair{t1, t0 - q * t1};
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
  }
  if (r0 != 1) throw ArithmeticError(std::to_string(a) + " is not a unit mod " + std::to_string(m));
  return reduce(t0);
}

Int PrimePowerModulus::pow(Int base, Int e) const {
  Int r = reduce(1), b = reduce(base);
  for (; e > 0; e >>= 1) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
  }
  return r;
}

Int PrimePowerModulus::unit_order(Int x) const {
  if (!is_unit(x)) throw ArithmeticError("unit_order of a non-unit");
  const Int n = unit_count();
  Int order = n;
  // Strip prime factors of phi while x^(order/p) stays 1.
  Int rest = n;
  for (Int p = 2; p * p <= rest || rest > 1; ++p) {
    if (p * p > rest) p = rest;
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    while (order % p == 0 && pow(x, order / p) == reduce(1)) order /= p;
  }
  return order;
}

std::string PrimePowerModulus::to_string() const { return std::to_string(value_); }

ResidueMatrix::ResidueMatrix(const PrimePowerModulus& modulus, Int m11, Int m12, Int m21, Int m22)
    : modulus_(modulus),
      e_{modulus.reduce(m11), modulus.reduce(m12), modulus.reduce(m21), modulus.reduce(m22)} {}

Int ResidueMatrix::det() const { return modulus_.reduce(e_[0] * e_[3] - e_[1] * e_[2]); }

bool ResidueMatrix::is_identity() const { return *this == identity(modulus_); }

std::uint64_t ResidueMatrix::key() const {
  if (modulus_.value() > kMaxPackedModulus)
    throw ArithmeticError("modulus too large for packed matrix keys");
  return packed::pack(e_[0], e_[1], e_[2], e_[3]);
}

ResidueMatrix ResidueMatrix::from_key(const PrimePowerModulus& modulus, std::uint64_t key) {
  return {modulus, static_cast<Int>(packed::entry(key, 0)), static_cast<Int>(packed::entry(key, 1)),
          static_cast<Int>(packed::entry(key, 2)), static_cast<Int>(packed::entry(key, 3))};
}

std::ostream& operator<<(std::ostream& os, const ResidueMatrix& m) {
  return os << '[' << m.m11() << ' ' << m.m12() << "; " << m.m21() << ' ' << m.m22() << ']';
}

ResidueMatrix mat_mul(const ResidueMatrix& a, const ResidueMatrix& b) {
  if (a.modulus() != b.modulus()) throw ArithmeticError("modulus mismatch in mat_mul");
  const auto& x = a.entries();
  const auto& y = b.entries();
  return {a.modulus(), x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

Int mat_det(const ResidueMatrix& a) { return a.det(); }

ResidueMatrix mat_inv(const ResidueMatrix& a) {
  const auto& m = a.modulus();
  if (!a.is_invertible()) throw ArithmeticError("matrix is not invertible");
  const Int di = m.inverse(a.det());
  return {m, a.m22() * di, -a.m12() * di, -a.m21() * di, a.m11() * di};
}

ResidueMatrix mat_pow(const ResidueMatrix& a, Int e) {
  if (e < 0) return mat_pow(mat_inv(a), -e);
  ResidueMatrix r = ResidueMatrix::identity(a.modulus()), b = a;
  for (; e > 0; e >>= 1) {
    if (e & 1) r = r * b;
    b = b * b;
  }
  return r;
}

Int mat_order(const ResidueMatrix& a) {
  if (!a.is_invertible()) throw ArithmeticError("mat_order of a non-invertible matrix");
  const auto& m = a.modulus();
  if (m.is_level_one()) return 1;
  // The order divides |GL2|; strip prime factors as for unit_order.
  Int order = gl2_order(m);
  Int rest = order;
  for (Int p = 2; rest > 1; ++p) {
    if (p * p > rest) p = rest;
    if (rest % p != 0) continue;
    while (rest % p == 0) rest /= p;
    while (order % p == 0 && mat_pow(a, order / p).is_identity()) order /= p;
  }
  return order;
}

ResidueMatrix reduce_matrix(const ResidueMatrix& a, const PrimePowerModulus& target) {
  if (!target.divides(a.modulus()))
    throw ArithmeticError("reduction target " + target.to_string() + " does not divide " +
                          a.modulus().to_string());
  return {target, a.entries()};
}

Int gl2_order(const PrimePowerModulus& m) {
  if (m.is_level_one()) return 1;
  const Int l = m.ell();
  Int r = (l - 1) * (l * l - 1);
  for (int i = 0; i < 4 * m.exponent() - 3; ++i) r *= l;
  return r;
}

Int sl2_order(const PrimePowerModulus& m) {
  if (m.is_level_one()) return 1;
  const Int l = m.ell();
  Int r = l * l - 1;
  for (int i = 0; i < 3 * m.exponent() - 2; ++i) r *= l;
  return r;
}

bool is_quadratic_residue(Int x, Int ell) {
  const PrimePowerModulus p(ell, 1);
  const Int r = p.reduce(x);
  if (r == 0) return true;
  if (ell == 2) return true;
  return p.pow(r, (ell - 1) / 2) == 1;
}

Int smallest_nonresidue(Int ell) {
  if (ell == 2 || !is_prime(ell)) throw ArithmeticError("no quadratic non-residue mod " + std::to_string(ell));
  for (Int e = 2; e < ell; ++e)
    if (!is_quadratic_residue(e, ell)) return e;
  throw ArithmeticError("unreachable");
}

}  // namespace isocurve
