#pragma once
// Naive reference implementations used as test oracles. Deliberately share
// no code with the library beyond plain integers.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using M = std::array<std::int64_t, 4>;
using V = std::array<std::int64_t, 2>;

inline std::int64_t md(std::int64_t x, std::int64_t n) { return ((x % n) + n) % n; }

inline M mul(const M& a, const M& b, std::int64_t n) {
  return {md(a[0] * b[0] + a[1] * b[2], n), md(a[0] * b[1] + a[1] * b[3], n),
          md(a[2] * b[0] + a[3] * b[2], n), md(a[2] * b[1] + a[3] * b[3], n)};
}

inline V act(const M& a, const V& v, std::int64_t n) {
  return {md(a[0] * v[0] + a[1] * v[1], n), md(a[2] * v[0] + a[3] * v[1], n)};
}

inline std::int64_t det(const M& a, std::int64_t n) { return md(a[0] * a[3] - a[1] * a[2], n); }

inline std::set<M> closure(const std::vector<M>& gens, std::int64_t n) {
  std::set<M> seen{{1 % n, 0, 0, 1 % n}};
  std::vector<M> todo(seen.begin(), seen.end());
  while (!todo.empty()) {
    M x = todo.back();
    todo.pop_back();
    for (const auto& g : gens) {
      M y = mul(x, g, n);
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return seen;
}

inline std::int64_t exact_order(const V& v, std::int64_t n) {
  std::int64_t g = std::gcd(std::gcd(v[0], v[1]), n);
  return n / g;
}

inline V neg(const V& v, std::int64_t n) { return {md(-v[0], n), md(-v[1], n)}; }

// Canonical +-class of a vector.
inline V pm(const V& v, std::int64_t n) { return std::min(v, neg(v, n)); }

// Canonical generator of the cyclic subgroup <v>: least multiple by a unit.
inline V line(const V& v, std::int64_t n) {
  V best = v;
  for (std::int64_t c = 1; c < n; ++c)
    if (std::gcd(c, n) == 1) best = std::min(best, V{md(c * v[0], n), md(c * v[1], n)});
  return best;
}

// Orbit sizes of a group (given by elements) on points of exact order n,
// modulo +-1 (gamma1) or as cyclic subgroups (gamma0).
inline std::vector<std::int64_t> orbit_sizes(const std::set<M>& group, std::int64_t n, bool gamma0) {
  std::set<V> points;
  for (std::int64_t x = 0; x < n; ++x)
    for (std::int64_t y = 0; y < n; ++y)
      if (exact_order({x, y}, n) == n) points.insert(gamma0 ? line({x, y}, n) : pm({x, y}, n));
  std::vector<std::int64_t> sizes;
  std::set<V> done;
  for (const auto& p : points) {
    if (done.count(p)) continue;
    std::set<V> orb;
    for (const auto& g : group) {
      V q = act(g, p, n);
      orb.insert(gamma0 ? line(q, n) : pm(q, n));
    }
    done.insert(orb.begin(), orb.end());
    sizes.push_back(static_cast<std::int64_t>(orb.size()));
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

// Genus of X1(n) or X0(n) from the SL2 action on +-points / cyclic
// subgroups: mu = #points, nu2/nu3 = fixed points of the order-4/order-6
// generators, cusps = cycles of [1 1; 0 1].
inline std::int64_t genus_by_points(std::int64_t n, bool gamma0) {
  std::vector<V> pts;
  std::map<V, int> id;
  for (std::int64_t x = 0; x < n; ++x)
    for (std::int64_t y = 0; y < n; ++y)
      if (exact_order({x, y}, n) == n) {
        V c = gamma0 ? line({x, y}, n) : pm({x, y}, n);
        if (!id.count(c)) {
          id[c] = static_cast<int>(pts.size());
          pts.push_back(c);
        }
      }
  auto image = [&](const M& g, int i) {
    V q = act(g, pts[i], n);
    return id.at(gamma0 ? line(q, n) : pm(q, n));
  };
  const M s{0, md(-1, n), 1, 0}, t{0, md(-1, n), 1, md(-1, n)}, u{1, 1, 0, 1};
  std::int64_t mu = static_cast<std::int64_t>(pts.size()), nu2 = 0, nu3 = 0, cusps = 0;
  std::vector<bool> seen(pts.size(), false);
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    nu2 += image(s, i) == i;
    nu3 += image(t, i) == i;
    if (seen[i]) continue;
    ++cusps;
    for (int j = i; !seen[j]; j = image(u, j)) seen[j] = true;
  }
  std::int64_t twelve = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
  return twelve / 12;
}

// Classical closed form for the genus of X1(n), n >= 5.
inline std::int64_t genus_x1_closed(std::int64_t n) {
  if (n <= 4) return 0;
  // 1 + n^2/24 prod(1 - 1/p^2) - 1/4 sum_{d|n} phi(d) phi(n/d), times 24
  auto phi = [](std::int64_t m) {
    std::int64_t r = m;
    for (std::int64_t p = 2; p * p <= m; ++p)
      if (m % p == 0) {
        while (m % p == 0) m /= p;
        r -= r / p;
      }
    if (m > 1) r -= r / m;
    return r;
  };
  std::int64_t num = n * n, den = 1, m = n;
  for (std::int64_t p = 2; p <= m; ++p)
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      num *= (p * p - 1);
      den *= p * p;
    }
  std::int64_t s = 0;
  for (std::int64_t d = 1; d <= n; ++d)
    if (n % d == 0) s += phi(d) * phi(n / d);
  // 24 g = 24 + num/den - 6 s
  return (24 + num / den - 6 * s) / 24;
}

inline std::vector<M> gl2_elements(std::int64_t n) {
  std::vector<M> out;
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      for (std::int64_t c = 0; c < n; ++c)
        for (std::int64_t d = 0; d < n; ++d)
          if (std::gcd(det({a, b, c, d}, n), n) == 1) out.push_back({a, b, c, d});
  return out;
}

// Every subgroup of GL2(Z/n) generated by at most three elements. For
// n = 3 that is every subgroup.
inline std::set<std::set<M>> small_subgroups(std::int64_t n) {
  const auto all = gl2_elements(n);
  std::set<std::set<M>> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i; j < all.size(); ++j) {
      if (!out.insert(closure({all[i], all[j]}, n)).second) continue;
      for (std::size_t k = j; k < all.size(); ++k) out.insert(closure({all[i], all[j], all[k]}, n));
    }
  return out;
}

inline std::set<M> conjugate(const M& c, const std::set<M>& h, std::int64_t n) {
  M ci{};
  for (const auto& b : gl2_elements(n))
    if (mul(c, b, n) == M{1 % n, 0, 0, 1 % n}) ci = b;
  std::set<M> out;
  for (const auto& x : h) out.insert(mul(mul(c, x, n), ci, n));
  return out;
}

// Least member of the conjugacy class of h, and the class size.
inline std::pair<std::set<M>, std::int64_t> conjugacy_class(const std::set<M>& h, std::int64_t n) {
  std::set<std::set<M>> orbit;
  for (const auto& c : gl2_elements(n)) orbit.insert(conjugate(c, h, n));
  return {*orbit.begin(), static_cast<std::int64_t>(orbit.size())};
}

// Classes of proper subgroups of GL2(Z/n) with surjective determinant and
// index <= bound: least member -> class size.
inline std::map<std::set<M>, std::int64_t> detsurjective_classes(std::int64_t n, std::int64_t bound) {
  const auto order = static_cast<std::int64_t>(gl2_elements(n).size());
  std::map<std::set<M>, std::int64_t> classes;
  for (const auto& h : small_subgroups(n)) {
    const std::int64_t index = order / static_cast<std::int64_t>(h.size());
    std::set<std::int64_t> dets;
    for (const auto& x : h) dets.insert(det(x, n));
    std::int64_t units = 0;
    for (std::int64_t u = 1; u < n; ++u) units += std::gcd(u, n) == 1;
    if (index == 1 || index > bound || static_cast<std::int64_t>(dets.size()) != units) continue;
    classes.insert(conjugacy_class(h, n));
  }
  return classes;
}

}  // namespace oracle
