#include <doctest.h>

#include <numeric>
#include <random>

#include "isocurve/modarith.hpp"
#include "oracle.hpp"

using namespace isocurve;

TEST_CASE("modulus construction") {
  CHECK(PrimePowerModulus(7, 2).value() == 49);
  CHECK(PrimePowerModulus::level_one(5).value() == 1);
  CHECK_THROWS_AS(PrimePowerModulus(6, 1), ArithmeticError);
  CHECK_THROWS_AS(PrimePowerModulus(7, -1), ArithmeticError);
  CHECK(PrimePowerModulus(3, 2).unit_count() == 6);
  CHECK(PrimePowerModulus(3, 1).divides(PrimePowerModulus(3, 3)));
  CHECK_FALSE(PrimePowerModulus(3, 1).divides(PrimePowerModulus(5, 3)));
}

TEST_CASE("unit inverse and order agree with brute force") {
  for (Int n : {2, 4, 8, 9, 25, 27, 49, 121}) {
    Int ell = 2;
    while (n % ell) ++ell;
    int e = 0;
    for (Int v = n; v > 1; v /= ell) ++e;
    const PrimePowerModulus m(ell, e);
    for (Int x = 0; x < n; ++x) {
      if (std::gcd(x, n) != 1) {
        CHECK_THROWS_AS(m.inverse(x), ArithmeticError);
        continue;
      }
      CHECK(m.mul(x, m.inverse(x)) == 1 % n);
      Int k = 1, y = x;
      while (y != 1 % n) y = y * x % n, ++k;
      CHECK(m.unit_order(x) == k);
    }
  }
}

TEST_CASE("matrix arithmetic against plain multiplication") {
  std::mt19937_64 rng(1);
  const PrimePowerModulus m(5, 2);
  std::uniform_int_distribution<Int> d(0, 24);
  for (int trial = 0; trial < 500; ++trial) {
    ResidueMatrix a(m, d(rng), d(rng), d(rng), d(rng)), b(m, d(rng), d(rng), d(rng), d(rng));
    const auto p = a * b;
    const auto q = oracle::mul({a[0], a[1], a[2], a[3]}, {b[0], b[1], b[2], b[3]}, 25);
    CHECK(oracle::M{p[0], p[1], p[2], p[3]} == q);
    CHECK(mat_det(p) == m.mul(a.det(), b.det()));
    CHECK(ResidueMatrix::from_key(m, a.key()) == a);
    if (a.is_invertible()) {
      CHECK((a * mat_inv(a)).is_identity());
      CHECK(mat_pow(a, mat_order(a)).is_identity());
    } else {
      CHECK_THROWS_AS(mat_inv(a), ArithmeticError);
    }
  }
}

TEST_CASE("key order is lexicographic") {
  const PrimePowerModulus m(7, 2);
  ResidueMatrix a(m, 1, 2, 3, 4), b(m, 1, 2, 4, 0), c(m, 2, 0, 0, 0);
  CHECK(a.key() < b.key());
  CHECK(b.key() < c.key());
}

TEST_CASE("group orders") {
  for (Int n : {2, 3, 4, 5, 7, 8, 9}) {
    Int ell = 2;
    while (n % ell) ++ell;
    int e = 0;
    for (Int v = n; v > 1; v /= ell) ++e;
    const PrimePowerModulus m(ell, e);
    const auto all = oracle::gl2_elements(n);
    CHECK(gl2_order(m) == static_cast<Int>(all.size()));
    Int sl = 0;
    for (const auto& x : all) sl += oracle::det(x, n) == 1 % n;
    CHECK(sl2_order(m) == sl);
  }
}

TEST_CASE("quadratic residues") {
  for (Int p : {3, 5, 7, 11, 13, 17, 19, 37}) {
    const Int e = smallest_nonresidue(p);
    for (Int x = 1; x < p; ++x) {
      bool square = false;
      for (Int y = 1; y < p; ++y) square = square || y * y % p == x;
      CHECK(is_quadratic_residue(x, p) == square);
      if (x < e) CHECK(square);
    }
    CHECK_FALSE(is_quadratic_residue(e, p));
  }
}
