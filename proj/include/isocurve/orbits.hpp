#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "isocurve/family.hpp"
#include "isocurve/gl2.hpp"

namespace isocurve {

/// Column vector (x, y) in (Z/ell^k)^2.
struct TorsionVector {
  Int x = 0;
  Int y = 0;
  friend auto operator<=>(const TorsionVector&, const TorsionVector&) = default;
};

bool has_exact_order(const TorsionVector& v, const PrimePowerModulus& m);

/// Lexicographically least generator of the cyclic submodule <v>.
TorsionVector canonical_submodule_generator(const TorsionVector& v, const PrimePowerModulus& m);

/// One Galois orbit of ±vectors (Gamma1) or cyclic submodules (Gamma0).
/// `size` is the degree of the corresponding closed point.
struct OrbitRecord {
  CurveFamily family;
  PrimePowerModulus level;
  TorsionVector representative;  // canonical: least ±rep, or least submodule generator
  Int size;
};

/// Orbits of <g mod ell^k, -I> on ±classes of vectors of exact order ell^k,
/// sorted by representative. Matrices act on column vectors from the left.
std::vector<OrbitRecord> gamma1_orbits(const MatrixGroup& g, int k);

/// Orbits of g mod ell^k on cyclic submodules of order ell^k.
std::vector<OrbitRecord> gamma0_orbits(const MatrixGroup& g, int k);

std::vector<OrbitRecord> orbits(const MatrixGroup& g, CurveFamily family, int k);

/// Degree of the reduced point at each level a = k, k-1, ..., 0.
std::vector<std::pair<int, Int>> orbit_degree_tower(const MatrixGroup& g, const OrbitRecord& rec);

/// Size of the orbit through the point of `family` at level ell^k containing v.
Int orbit_size_through(const MatrixGroup& g, CurveFamily family, int k, const TorsionVector& v);

}  // namespace isocurve
