#pragma once
// Bridges between library groups and the plain oracle types.

#include <random>
#include <set>

#include "isocurve/gl2.hpp"
#include "oracle.hpp"

namespace support {

inline oracle::M to_plain(const isocurve::ResidueMatrix& m) { return {m[0], m[1], m[2], m[3]}; }

inline std::set<oracle::M> plain_elements(const isocurve::MatrixGroup& g) {
  std::set<oracle::M> out;
  const auto& els = g.elements();
  for (std::size_t i = 0; i < els.size(); ++i) out.insert(to_plain(els.at(i)));
  return out;
}

inline isocurve::ResidueMatrix random_invertible(const isocurve::PrimePowerModulus& m, std::mt19937_64& rng) {
  std::uniform_int_distribution<isocurve::Int> d(0, m.value() - 1);
  for (;;) {
    isocurve::ResidueMatrix x(m, d(rng), d(rng), d(rng), d(rng));
    if (x.is_invertible()) return x;
  }
}

// Subgroup generated by a few random elements of GL2(Z/m), sometimes
// intersected with a Borel-like shape to keep orbits interesting.
inline isocurve::MatrixGroup random_subgroup(const isocurve::PrimePowerModulus& m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 3), shape(0, 2);
  std::vector<isocurve::ResidueMatrix> gens;
  const int n = count(rng);
  const int kind = shape(rng);
  for (int i = 0; i < n; ++i) {
    auto x = random_invertible(m, rng);
    if (kind == 1) x = isocurve::ResidueMatrix(m, x[0] % m.ell() == 0 ? 1 : x[0], x[1], 0, x[3] % m.ell() == 0 ? 1 : x[3]);
    if (kind == 2) x = isocurve::ResidueMatrix(m, 1, x[1], 0, x[3] % m.ell() == 0 ? 1 : x[3]);
    gens.push_back(x);
  }
  return {m, gens};
}

}  // namespace support
