#include <doctest.h>

#include "isocurve/isolated.hpp"
#include "isocurve/labelio.hpp"
#include "isocurve/modcurves.hpp"
#include "support.hpp"

using namespace isocurve;

namespace {
MatrixGroup record(const std::string& label) {
  for (const auto& r : read_generators_file(ISOCURVE_TEST_DATA)) if (r.label == label) return r.group();
  throw std::runtime_error("missing " + label);
}
}  // namespace

TEST_CASE("full GL2 yields only the level-one pair") {
  const auto g = MatrixGroup::full(PrimePowerModulus(5, 2));
  for (auto fam : {CurveFamily::Gamma1, CurveFamily::Gamma0}) {
    const auto pairs = candidate_pairs(g, fam);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].level.value() == 1);
    CHECK(pairs[0].degree == 1);
    const auto rep = analyze(g, fam);
    CHECK(rep.final_set().empty());
    CHECK(rep.pairs[0].elimination == Elimination::RiemannRoch);  // degree 1 > genus 0
  }
}

TEST_CASE("candidate pairs keep provenance for every orbit") {
  const auto g = build_cartan({CartanKind::Borel, PrimePowerModulus(7, 2), {}});
  for (auto fam : {CurveFamily::Gamma1, CurveFamily::Gamma0}) {
    std::size_t total = 0;
    for (const auto& p : candidate_pairs(g, fam)) {
      CHECK(!p.provenance.empty());
      for (const auto& src : p.provenance) {
        CHECK(p.level.divides(src.level));
        CHECK(src.orbit_size % p.degree == 0);
      }
      total += p.provenance.size();
    }
    CHECK(total == orbits(g, fam, 1).size() + orbits(g, fam, 2).size());
  }
}

TEST_CASE("Riemann-Roch filter compares with the genus") {
  const auto g = build_cartan({CartanKind::Borel, PrimePowerModulus(13, 1), {}});
  auto pairs = candidate_pairs(g, CurveFamily::Gamma1);
  filter_riemann_roch(pairs, CurveFamily::Gamma1);
  for (const auto& p : pairs) {
    if (p.level.value() == 1) continue;
    const bool over = p.degree > genus_X1(p.level.value());
    CHECK(over == (p.elimination == Elimination::RiemannRoch));
    if (over) CHECK(p.witness_genus == genus_X1(p.level.value()));
  }
}

TEST_CASE("genus-zero filter") {
  const auto borel = build_cartan({CartanKind::Borel, PrimePowerModulus(5, 1), {}});
  auto pairs = candidate_pairs(borel, CurveFamily::Gamma0);
  filter_genus_zero(pairs, borel);
  for (const auto& p : pairs) {
    CHECK(p.elimination == Elimination::GenusZeroImage);
    CHECK(p.witness_genus == 0);
  }
  // nonsplit normalizer mod 11 has genus 1: only the level-one pair goes
  const auto ns = build_cartan({CartanKind::NonsplitNormalizer, PrimePowerModulus(11, 1), {}});
  pairs = candidate_pairs(ns, CurveFamily::Gamma1);
  filter_genus_zero(pairs, ns);
  for (const auto& p : pairs) CHECK(p.survives() == (p.level.value() == 11));
}

TEST_CASE("known images") {
  auto g17 = analyze(record("17.72.1.2"), CurveFamily::Gamma1);
  CHECK(g17.final_set() == std::vector<std::pair<Int, Int>>{{17, 4}});
  REQUIRE(g17.annotations.size() == 1);
  CHECK(g17.annotations[0].text.rfind("cited, not computed", 0) == 0);
  auto g11 = analyze(record("11.60.1.101"), CurveFamily::Gamma0);
  CHECK(g11.final_set() == std::vector<std::pair<Int, Int>>{{11, 1}});
  CHECK(analyze(record("7.28.0.1"), CurveFamily::Gamma1).final_set().empty());
}

TEST_CASE("non-surjective determinant produces a warning") {
  const auto rep = analyze(MatrixGroup::special_linear(PrimePowerModulus(5, 1)), CurveFamily::Gamma1);
  CHECK(rep.warnings.size() == 1);
}

TEST_CASE("report serialization round-trips through the parser") {
  auto rep = analyze(record("37.114.4.1"), CurveFamily::Gamma1);
  const auto parsed = parse_reports(serialize_report(rep));
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].result == rep.final_set());
  REQUIRE(parsed[0].pairs.size() == rep.pairs.size());
  for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
    CHECK(parsed[0].pairs[i].degree == rep.pairs[i].degree);
    CHECK(parsed[0].pairs[i].kept == rep.pairs[i].survives());
    CHECK(parsed[0].pairs[i].reason == rep.pairs[i].reason());
  }
  CHECK(parsed[0].notes.size() == rep.annotations.size());
}

TEST_CASE("citations") {
  CHECK(citation_for(CurveFamily::Gamma1, 37, 18).has_value());
  CHECK(citation_for(CurveFamily::Gamma0, 17, 1).has_value());
  CHECK_FALSE(citation_for(CurveFamily::Gamma0, 13, 1).has_value());
  CHECK_FALSE(citation_for(CurveFamily::Gamma1, 17, 1).has_value());
}
