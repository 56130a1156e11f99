#pragma once

#include "isocurve/family.hpp"
#include "isocurve/gl2.hpp"

namespace isocurve {

/// Ramification data of X_G -> X(1) and the resulting genus.
struct GenusProfile {
  Int mu = 1;      // degree over the j-line
  Int nu2 = 1;     // elliptic points of order 2
  Int nu3 = 1;     // elliptic points of order 3
  Int nu_inf = 1;  // cusps
  Int genus = 0;

  friend bool operator==(const GenusProfile&, const GenusProfile&) = default;
};

/// Genus from the Riemann-Hurwitz count; throws if the value is not a
/// non-negative integer.
Int genus_from_counts(Int mu, Int nu2, Int nu3, Int nu_inf);

Int genus_X1(Int n);
Int genus_X0(Int n);

struct MapDegreeSpec {
  CurveFamily family;
  Int a;  // target level
  Int b;  // X(ab) -> X(a)
};

/// Degree of the natural map X1(ab) -> X1(a) or X0(ab) -> X0(a).
Int map_degree(const MapDegreeSpec& spec);

/// Genus profile of X_G, computed on right cosets of Gamma = ±G ∩ SL2 in
/// SL2(Z/N). Cusps are orbits of [1 1; 0 1] acting on Gamma\SL2 by right
/// multiplication; nu2 and nu3 count cosets fixed by [0 -1; 1 0] and
/// [0 -1; 1 -1]. Conjugate (or transposed) groups give equal profiles.
GenusProfile genus_XG(const MatrixGroup& g, std::size_t cap = kDefaultEnumerationCap);

}  // namespace isocurve
