#include "isocurve/modcurves.hpp"

#include <algorithm>
#include <numeric>

namespace isocurve {

namespace {

std::vector<Int> prime_factors(Int n) {
  std::vector<Int> ps;
  for (Int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

std::vector<Int> divisors(Int n) {
  std::vector<Int> ds;
  for (Int d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      ds.push_back(d);
      if (d * d != n) ds.push_back(n / d);
    }
  std::sort(ds.begin(), ds.end());
  return ds;
}

Int euler_phi(Int n) {
  Int r = n;
  for (Int p : prime_factors(n)) r = r / p * (p - 1);
  return r;
}

}  // namespace

Int genus_from_counts(Int mu, Int nu2, Int nu3, Int nu_inf) {
  // 12(g - 1) = mu - 3 nu2 - 4 nu3 - 6 nu_inf
  const Int twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nu_inf;
  if (twelve_g % 12 != 0 || twelve_g < 0)
    throw ArithmeticError("inconsistent ramification counts (mu=" + std::to_string(mu) + ", nu2=" +
                          std::to_string(nu2) + ", nu3=" + std::to_string(nu3) +
                          ", cusps=" + std::to_string(nu_inf) + ")");
  return twelve_g / 12;
}

Int genus_X1(Int n) {
  if (n < 1) throw ArithmeticError("genus_X1 needs N >= 1");
  if (n <= 4) return 0;
  Int mu2 = n * n;  // 2 * mu
  for (Int p : prime_factors(n)) mu2 = mu2 / (p * p) * (p * p - 1);
  Int cusps2 = 0;  // 2 * number of cusps
  for (Int d : divisors(n)) cusps2 += euler_phi(d) * euler_phi(n / d);
  return genus_from_counts(mu2 / 2, 0, 0, cusps2 / 2);
}

Int genus_X0(Int n) {
  if (n < 1) throw ArithmeticError("genus_X0 needs N >= 1");
  if (n == 1) return 0;
  Int mu = n, nu2 = (n % 4 == 0) ? 0 : 1, nu3 = (n % 9 == 0) ? 0 : 1;
  for (Int p : prime_factors(n)) {
    mu = mu / p * (p + 1);
    if (p != 2) nu2 *= (p % 4 == 1) ? 2 : 0;
    if (p != 3) nu3 *= (p % 3 == 1) ? 2 : 0;
  }
  Int cusps = 0;
  for (Int d : divisors(n)) cusps += euler_phi(std::gcd(d, n / d));
  return genus_from_counts(mu, nu2, nu3, cusps);
}

Int map_degree(const MapDegreeSpec& spec) {
  const Int a = spec.a, b = spec.b;
  if (a < 1 || b < 1) throw ArithmeticError("map_degree needs a, b >= 1");
  Int num = 1, den = 1;
  if (spec.family == CurveFamily::Gamma1) {
    num = b * b;
    for (Int p : prime_factors(b))
      if (a % p != 0) {
        num *= p * p - 1;
        den *= p * p;
      }
    if (a <= 2 && a * b > 2) den *= 2;
  } else {
    num = b;
    for (Int p : prime_factors(b))
      if (a % p != 0) {
        num *= p + 1;
        den *= p;
      }
  }
  if (num % den != 0) throw ArithmeticError("non-integral map degree");
  return num / den;
}

GenusProfile genus_XG(const MatrixGroup& g, std::size_t cap) {
  const auto& mod = g.modulus();
  if (mod.is_level_one()) return {};
  const auto gamma = sl2_part(g, /*plus_minus=*/true, cap);
  const Int n = mod.value();
  if (static_cast<std::size_t>(sl2_order(mod)) > cap)
    throw CapExceeded("SL2(Z/" + mod.to_string() + ") exceeds the enumeration cap");

  std::vector<std::uint64_t> sl2;
  sl2.reserve(static_cast<std::size_t>(sl2_order(mod)));
  for (Int a = 0; a < n; ++a)
    for (Int b = 0; b < n; ++b)
      for (Int c = 0; c < n; ++c)
        for (Int d = 0; d < n; ++d)
          if (mod.reduce(a * d - b * c) == 1) sl2.push_back(packed::pack(a, b, c, d));
  const ElementSet whole(mod, std::move(sl2));
  const auto un = static_cast<std::uint64_t>(n);

  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> coset(whole.size(), kNone);
  std::vector<std::uint64_t> reps;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    if (coset[i] != kNone) continue;
    const auto x = whole.keys()[i];
    for (auto h : gamma.keys()) coset[whole.index_of(packed::mul(h, x, un))] = reps.size();
    reps.push_back(x);
  }
  const auto s = ResidueMatrix(mod, 0, -1, 1, 0).key();
  const auto t = ResidueMatrix(mod, 0, -1, 1, -1).key();
  const auto u = ResidueMatrix(mod, 1, 1, 0, 1).key();
  auto image = [&](std::size_t c, std::uint64_t y) { return coset[whole.index_of(packed::mul(reps[c], y, un))]; };

  GenusProfile p;
  p.mu = static_cast<Int>(reps.size());
  p.nu2 = p.nu3 = p.nu_inf = 0;
  std::vector<bool> seen(reps.size(), false);
  for (std::size_t c = 0; c < reps.size(); ++c) {
    if (image(c, s) == c) ++p.nu2;
    if (image(c, t) == c) ++p.nu3;
    if (seen[c]) continue;
    ++p.nu_inf;
    for (std::size_t d = c; !seen[d]; d = image(d, u)) seen[d] = true;
  }
  p.genus = genus_from_counts(p.mu, p.nu2, p.nu3, p.nu_inf);
  return p;
}

}  // namespace isocurve
