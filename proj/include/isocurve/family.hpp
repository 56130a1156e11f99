#pragma once

#include <stdexcept>
#include <string>

namespace isocurve {

/// Which tower of modular curves: X1(ell^k) (points) or X0(ell^k) (cyclic subgroups).
enum class CurveFamily { Gamma1, Gamma0 };

inline std::string to_string(CurveFamily f) { return f == CurveFamily::Gamma1 ? "gamma1" : "gamma0"; }

inline CurveFamily parse_family(const std::string& s) {
  if (s == "gamma1" || s == "Gamma1") return CurveFamily::Gamma1;
  if (s == "gamma0" || s == "Gamma0") return CurveFamily::Gamma0;
  throw std::invalid_argument("unknown family '" + s + "' (expected gamma1 or gamma0)");
}

}  // namespace isocurve
