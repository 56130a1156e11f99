#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isocurve/family.hpp"
#include "isocurve/gl2.hpp"
#include "isocurve/orbits.hpp"

namespace isocurve {

enum class Elimination { None, RiemannRoch, GenusZeroImage };

std::string to_string(Elimination e);

/// An orbit at level ell^k that reduced to a candidate pair.
struct PairSource {
  PrimePowerModulus level = PrimePowerModulus::level_one(2);
  TorsionVector representative;
  Int orbit_size = 0;

  friend bool operator==(const PairSource&, const PairSource&) = default;
};

struct CandidatePair {
  PrimePowerModulus level = PrimePowerModulus::level_one(2);  // ell^a, possibly level one
  Int degree = 0;
  std::vector<PairSource> provenance;
  Elimination elimination = Elimination::None;
  // Genus of X1(ell^a)/X0(ell^a) for riemann_roch, of X_{G mod ell^a} for
  // genus_zero_image; unset while the pair survives.
  std::optional<Int> witness_genus;

  bool survives() const { return elimination == Elimination::None; }
  std::string reason() const;
};

/// Step one: for every orbit at every level ell^k (1 <= k <= presented
/// exponent), the smallest a for which the degree is multiplicative down to
/// ell^a. Pairs are deduplicated and sorted by (a, degree).
std::vector<CandidatePair> candidate_pairs(const MatrixGroup& g, CurveFamily family,
                                           std::size_t cap = kDefaultEnumerationCap);

/// Tags pairs with degree > genus(X1(ell^a)) (resp. X0).
void filter_riemann_roch(std::vector<CandidatePair>& pairs, CurveFamily family);

/// Tags surviving pairs whose reduced image gives a genus-zero curve.
void filter_genus_zero(std::vector<CandidatePair>& pairs, const MatrixGroup& g,
                       std::size_t cap = kDefaultEnumerationCap);

/// Literature fact attached to a surviving pair. Never computed.
struct Annotation {
  Int level = 1;
  Int degree = 0;
  std::string text;
};

/// Static citation table keyed by (family, level, degree).
std::optional<std::string> citation_for(CurveFamily family, Int level, Int degree);

struct FilterReport {
  std::string label;
  CurveFamily family = CurveFamily::Gamma1;
  std::vector<CandidatePair> pairs;
  std::vector<Annotation> annotations;
  std::vector<std::string> warnings;

  /// Surviving (level, degree) pairs in report order.
  std::vector<std::pair<Int, Int>> final_set() const;
};

FilterReport analyze(const MatrixGroup& image, CurveFamily family,
                     std::size_t cap = kDefaultEnumerationCap);

/// Line format, one pair per line:
///   label TAB family TAB level TAB degree TAB status TAB reason
/// then NOTE/WARN lines and a closing `RESULT` line whose tab-separated
/// fields are the surviving "level degree" pairs.
std::string serialize_report(const FilterReport& report);

}  // namespace isocurve
