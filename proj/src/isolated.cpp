#include "isocurve/isolated.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "isocurve/modcurves.hpp"

namespace isocurve {

std::string to_string(Elimination e) {
  switch (e) {
    case Elimination::None: return "none";
    case Elimination::RiemannRoch: return "riemann_roch";
    case Elimination::GenusZeroImage: return "genus_zero_image";
  }
  return "?";
}

std::string CandidatePair::reason() const {
  std::ostringstream os;
  switch (elimination) {
    case Elimination::None:
      os << "none";
      break;
    case Elimination::RiemannRoch:
      os << "riemann_roch: degree " << degree << " > genus " << witness_genus.value_or(-1);
      break;
    case Elimination::GenusZeroImage:
      os << "genus_zero_image: genus of X_G mod " << level.value() << " is " << witness_genus.value_or(-1);
      break;
  }
  return os.str();
}

namespace {

Int modular_genus(CurveFamily family, Int n) { return family == CurveFamily::Gamma1 ? genus_X1(n) : genus_X0(n); }

}  // namespace

std::vector<CandidatePair> candidate_pairs(const MatrixGroup& g, CurveFamily family, std::size_t cap) {
  (void)cap;  // orbit carriers are bounded by ell^(2n), far below any cap
  const auto& mod = g.modulus();
  std::map<std::pair<int, Int>, CandidatePair> found;
  for (int k = 1; k <= mod.exponent(); ++k) {
    for (const auto& rec : orbits(g, family, k)) {
      const auto tower = orbit_degree_tower(g, rec);  // a = k, k-1, ..., 0
      int best = k;
      Int best_degree = rec.size;
      for (const auto& [a, deg] : tower) {
        if (a == k) continue;
        const Int b = mod.with_exponent(k - a).value();
        const Int expected = deg * map_degree({family, mod.with_exponent(a).value(), b});
        if (expected == rec.size) {
          best = a;
          best_degree = deg;
        }
      }
      auto& pair = found[{best, best_degree}];
      if (pair.degree == 0) {
        pair.level = mod.with_exponent(best);
        pair.degree = best_degree;
      }
      pair.provenance.push_back({rec.level, rec.representative, rec.size});
    }
  }
  std::vector<CandidatePair> out;
  out.reserve(found.size());
  for (auto& [key, pair] : found) out.push_back(std::move(pair));
  return out;
}

void filter_riemann_roch(std::vector<CandidatePair>& pairs, CurveFamily family) {
  for (auto& p : pairs) {
    if (!p.survives()) continue;
    const Int genus = modular_genus(family, p.level.value());
    if (p.degree > genus) {
      p.elimination = Elimination::RiemannRoch;
      p.witness_genus = genus;
    }
  }
}

void filter_genus_zero(std::vector<CandidatePair>& pairs, const MatrixGroup& g, std::size_t cap) {
  std::map<int, Int> genus_at;
  for (auto& p : pairs) {
    if (!p.survives()) continue;
    const int a = p.level.exponent();
    auto it = genus_at.find(a);
    if (it == genus_at.end())
      it = genus_at.emplace(a, genus_XG(reduce_group(g, p.level), cap).genus).first;
    if (it->second == 0) {
      p.elimination = Elimination::GenusZeroImage;
      p.witness_genus = 0;
    }
  }
}

std::optional<std::string> citation_for(CurveFamily family, Int level, Int degree) {
  if (family == CurveFamily::Gamma1) {
    if (level == 17 && degree == 4)
      return "cited, not computed: every degree-4 point on X1(17) is P^1-parameterized "
             "(Derickx-Kamienny-Mazur), so no isolated point arises";
    if (level == 37 && degree == 6)
      return "cited, not computed: isolated, since 6 is below half the Q-gonality of X1(37) "
             "(Frey; gonality by Derickx-van Hoeij)";
    if (level == 37 && degree == 18)
      return "cited, not computed: isolated by the 2025 algorithmic classification of isolated points";
    return std::nullopt;
  }
  if (degree == 1 && (level == 11 || level == 17 || level == 37))
    return "cited, not computed: X0(" + std::to_string(level) +
           ") has finitely many rational points, so this rational point is isolated";
  return std::nullopt;
}

std::vector<std::pair<Int, Int>> FilterReport::final_set() const {
  std::vector<std::pair<Int, Int>> out;
  for (const auto& p : pairs)
    if (p.survives()) out.emplace_back(p.level.value(), p.degree);
  return out;
}

FilterReport analyze(const MatrixGroup& image, CurveFamily family, std::size_t cap) {
  FilterReport report;
  report.label = image.label();
  report.family = family;
  if (!det_image(image).surjective)
    report.warnings.push_back("determinant is not surjective; degrees have no arithmetic meaning");
  report.pairs = candidate_pairs(image, family, cap);
  filter_riemann_roch(report.pairs, family);
  filter_genus_zero(report.pairs, image, cap);
  for (const auto& [lvl, deg] : report.final_set())
    if (auto text = citation_for(family, lvl, deg)) report.annotations.push_back({lvl, deg, *text});
  return report;
}

std::string serialize_report(const FilterReport& report) {
  const std::string label = report.label.empty() ? "-" : report.label;
  const std::string fam = to_string(report.family);
  std::ostringstream os;
  for (const auto& p : report.pairs)
    os << label << '\t' << fam << '\t' << p.level.value() << '\t' << p.degree << '\t'
       << (p.survives() ? "kept" : "eliminated") << '\t' << p.reason() << '\n';
  for (const auto& n : report.annotations)
    os << "NOTE\t" << label << '\t' << n.level << ' ' << n.degree << '\t' << n.text << '\n';
  for (const auto& w : report.warnings) os << "WARN\t" << label << '\t' << w << '\n';
  os << "RESULT";
  for (const auto& [lvl, deg] : report.final_set()) os << '\t' << lvl << ' ' << deg;
  os << '\n';
  return os.str();
}

}  // namespace isocurve
