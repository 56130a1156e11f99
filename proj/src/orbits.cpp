#include "isocurve/orbits.hpp"

#include <algorithm>

namespace isocurve {

namespace {

struct Action {
  Int m;
  std::vector<ResidueMatrix::Entries> mats;

  std::size_t apply(std::size_t idx, const ResidueMatrix::Entries& a) const {
    const Int x = static_cast<Int>(idx) / m, y = static_cast<Int>(idx) % m;
    const Int nx = (a[0] * x + a[1] * y) % m;
    const Int ny = (a[2] * x + a[3] * y) % m;
    return static_cast<std::size_t>(nx * m + ny);
  }
};

Action action_at(const MatrixGroup& g, int k, bool with_minus) {
  const auto& mod = g.modulus();
  if (k < 0 || k > mod.exponent())
    throw ArithmeticError("orbit level " + std::to_string(k) + " exceeds modulus exponent " +
                          std::to_string(mod.exponent()));
  const auto target = mod.with_exponent(k);
  Action act{target.value(), {}};
  for (const auto& x : g.generators()) act.mats.push_back(reduce_matrix(x, target).entries());
  if (with_minus) act.mats.push_back(ResidueMatrix::scalar(target, -1).entries());
  return act;
}

bool exact(std::size_t idx, Int m, Int ell) {
  const Int x = static_cast<Int>(idx) / m, y = static_cast<Int>(idx) % m;
  return x % ell != 0 || y % ell != 0;
}

std::size_t negate_idx(std::size_t idx, Int m) {
  const Int x = static_cast<Int>(idx) / m, y = static_cast<Int>(idx) % m;
  return static_cast<std::size_t>(((m - x) % m) * m + (m - y) % m);
}

// Canonical class id for every vector of exact order: least index among
// its ± multiples (Gamma1) or unit multiples (Gamma0).
std::vector<std::size_t> class_ids(const PrimePowerModulus& mod, CurveFamily family) {
  const Int m = mod.value(), ell = mod.ell();
  const auto n = static_cast<std::size_t>(m * m);
  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> id(n, kNone);
  std::vector<Int> scalars;
  if (family == CurveFamily::Gamma1) {
    scalars = {1, m - 1};
  } else {
    for (Int u = 1; u < m; ++u)
      if (u % ell != 0) scalars.push_back(u);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (id[v] != kNone || !exact(v, m, ell)) continue;
    const Int x = static_cast<Int>(v) / m, y = static_cast<Int>(v) % m;
    for (Int u : scalars) id[static_cast<std::size_t>((u * x % m) * m + u * y % m)] = v;
  }
  return id;
}

std::vector<OrbitRecord> orbit_decomposition(const MatrixGroup& g, CurveFamily family, int k) {
  const auto mod = g.modulus().with_exponent(k);
  if (k == 0) return {{family, mod, {0, 0}, 1}};
  const Int m = mod.value();
  const auto act = action_at(g, k, family == CurveFamily::Gamma1);
  const auto ids = class_ids(mod, family);
  std::vector<bool> seen(ids.size(), false);
  std::vector<OrbitRecord> out;
  std::vector<std::size_t> queue;
  for (std::size_t v = 0; v < ids.size(); ++v) {
    if (!exact(v, m, mod.ell()) || ids[v] != v || seen[v]) continue;
    queue.assign(1, v);
    seen[v] = true;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (const auto& a : act.mats) {
        const auto w = ids[act.apply(queue[head], a)];
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    out.push_back({family, mod, {static_cast<Int>(v) / m, static_cast<Int>(v) % m},
                   static_cast<Int>(queue.size())});
  }
  return out;
}

}  // namespace

bool has_exact_order(const TorsionVector& v, const PrimePowerModulus& m) {
  if (m.is_level_one()) return true;
  return m.reduce(v.x) % m.ell() != 0 || m.reduce(v.y) % m.ell() != 0;
}

TorsionVector canonical_submodule_generator(const TorsionVector& v, const PrimePowerModulus& m) {
  if (!has_exact_order(v, m)) throw ArithmeticError("vector does not have exact order");
  TorsionVector best{m.reduce(v.x), m.reduce(v.y)};
  for (Int u = 1; u < m.value(); ++u) {
    if (!m.is_unit(u)) continue;
    const TorsionVector w{m.mul(u, v.x), m.mul(u, v.y)};
    best = std::min(best, w);
  }
  return best;
}

std::vector<OrbitRecord> gamma1_orbits(const MatrixGroup& g, int k) {
  return orbit_decomposition(g, CurveFamily::Gamma1, k);
}

std::vector<OrbitRecord> gamma0_orbits(const MatrixGroup& g, int k) {
  return orbit_decomposition(g, CurveFamily::Gamma0, k);
}

std::vector<OrbitRecord> orbits(const MatrixGroup& g, CurveFamily family, int k) {
  return orbit_decomposition(g, family, k);
}

Int orbit_size_through(const MatrixGroup& g, CurveFamily family, int k, const TorsionVector& v) {
  const auto mod = g.modulus().with_exponent(k);
  if (k == 0) return 1;
  const Int m = mod.value();
  TorsionVector start{mod.reduce(v.x), mod.reduce(v.y)};
  if (!has_exact_order(start, mod)) throw ArithmeticError("vector does not have exact order");
  const auto act = action_at(g, k, family == CurveFamily::Gamma1);
  auto canon = [&](std::size_t idx) -> std::size_t {
    if (family == CurveFamily::Gamma1) return std::min(idx, negate_idx(idx, m));
    const auto c = canonical_submodule_generator({static_cast<Int>(idx) / m, static_cast<Int>(idx) % m}, mod);
    return static_cast<std::size_t>(c.x * m + c.y);
  };
  std::vector<bool> seen(static_cast<std::size_t>(m * m), false);
  std::vector<std::size_t> queue{canon(static_cast<std::size_t>(start.x * m + start.y))};
  seen[queue[0]] = true;
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (const auto& a : act.mats) {
      const auto w = canon(act.apply(queue[head], a));
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  return static_cast<Int>(queue.size());
}

std::vector<std::pair<int, Int>> orbit_degree_tower(const MatrixGroup& g, const OrbitRecord& rec) {
  const int k = rec.level.exponent();
  std::vector<std::pair<int, Int>> tower;
  for (int a = k; a >= 0; --a) {
    if (a == k) {
      tower.emplace_back(a, rec.size);
    } else {
      tower.emplace_back(a, orbit_size_through(g, rec.family, a, rec.representative));
    }
  }
  return tower;
}

}  // namespace isocurve
