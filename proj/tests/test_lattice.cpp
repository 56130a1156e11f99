#include <doctest.h>

#include <map>
#include <set>

#include "isocurve/labelio.hpp"
#include "isocurve/lattice.hpp"
#include "support.hpp"

using namespace isocurve;

namespace {

using Plain = std::set<oracle::M>;

MatrixGroup record(const std::string& label) {
  for (const auto& r : read_generators_file(ISOCURVE_TEST_DATA))
    if (r.label == label) return r.group();
  throw std::runtime_error("missing " + label);
}

}  // namespace

TEST_CASE("GL2(F3) subgroup search matches brute force") {
  CHECK(oracle::small_subgroups(3).size() == 55);  // number of subgroups of GL(2,3)
  const auto classes = oracle::detsurjective_classes(3, 8);
  const auto found = proper_detsurjective_subgroups(MatrixGroup::full(PrimePowerModulus(3, 1)), 8);
  REQUIRE(found.size() == classes.size());
  std::set<Plain> matched;
  for (const auto& c : found) {
    const auto els = support::plain_elements(c.representative);
    CHECK(c.det_surjective);
    CHECK(c.index_in_parent == 48 / static_cast<Int>(els.size()));
    const auto [least, size] = oracle::conjugacy_class(els, 3);
    REQUIRE(classes.count(least) == 1);
    CHECK(classes.at(least) == c.class_size);
    CHECK(size == c.class_size);
    CHECK(matched.insert(least).second);
  }
  CHECK(all_subgroups_bruteforce(MatrixGroup::full(PrimePowerModulus(3, 1))).size() == 55);
}

TEST_CASE("subgroup classes are conjugation invariant") {
  const PrimePowerModulus m(5, 1);
  const auto b = build_cartan({CartanKind::SplitNormalizer, m, {}});
  const auto c = conjugate_group(ResidueMatrix(m, 1, 2, 3, 3), b);
  const auto x = proper_detsurjective_subgroups(b, 10), y = proper_detsurjective_subgroups(c, 10);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i].index_in_parent == y[i].index_in_parent);
    CHECK(x[i].class_size == y[i].class_size);
  }
}

TEST_CASE("budget exhaustion is reported") {
  LatticeOptions opts;
  opts.max_candidates = 3;
  CHECK_THROWS_AS(proper_detsurjective_subgroups(MatrixGroup::full(PrimePowerModulus(5, 1)), 30, opts),
                  SearchBudgetExceeded);
}

TEST_CASE("kernel module stable subspaces") {
  const auto gl = KernelModule::of(MatrixGroup::full(PrimePowerModulus(5, 1)));
  // 0, scalars, trace zero, everything
  CHECK(gl.stable_subspaces().size() == 4);
  const auto split = KernelModule::of(build_cartan({CartanKind::Split, PrimePowerModulus(5, 1), {}}));
  for (const auto& u : split.stable_subspaces()) CHECK(split.is_stable(u));
  CHECK(split.stable_subspaces().size() > gl.stable_subspaces().size());
}

TEST_CASE("preimage rigidity") {
  const PrimePowerModulus m7(7, 1), m49(7, 2);
  LatticeOptions opts;
  opts.threads = 2;
  const auto gl = preimage_rigidity(MatrixGroup::full(m7), 2, opts);
  CHECK(gl.rigid);
  CHECK(gl.stable_subspaces == 3);

  const auto ns = build_cartan({CartanKind::NonsplitNormalizer, m7, {}});
  const auto r = preimage_rigidity(ns, 2, opts);
  REQUIRE_FALSE(r.rigid);
  REQUIRE(r.counterexample.has_value());
  CHECK(is_rigidity_counterexample(*r.counterexample, ns));
  // the nonsplit normalizer mod 49 reduces onto the one mod 7
  CHECK(is_rigidity_counterexample(build_cartan({CartanKind::NonsplitNormalizer, m49, {}}), ns));
  CHECK_FALSE(is_rigidity_counterexample(full_preimage(ns, m49), ns));
  CHECK_THROWS(preimage_rigidity(ns, 3, opts));
}

TEST_CASE("index-49 subgroup of 49.196.9.1") {
  const auto g = record("49.196.9.1");
  LatticeOptions opts;
  opts.same_reduction = true;
  const auto classes = proper_detsurjective_subgroups(g, 49, opts);
  REQUIRE(classes.size() == 1);
  CHECK(classes[0].index_in_parent == 49);
  const auto mem = split_cartan_membership(classes[0].representative);
  CHECK(mem.contained);
  CHECK(mem.index == 7);
  REQUIRE(mem.witness.has_value());
  const auto cs = build_cartan({CartanKind::SplitNormalizer, PrimePowerModulus(7, 2), {}});
  for (const auto& x : classes[0].representative.generators()) CHECK(cs.contains(conjugate(*mem.witness, x)));
  CHECK_FALSE(split_cartan_membership(g).contained);
}

TEST_CASE("generator extraction") {
  const auto g = build_cartan({CartanKind::Borel, PrimePowerModulus(5, 1), {}});
  const auto& els = g.elements();
  std::vector<std::uint64_t> keys(els.keys().begin(), els.keys().end());
  const MatrixGroup h(g.modulus(), extract_generators(g.modulus(), keys));
  CHECK(h.elements() == els);
}

TEST_CASE("F_p linear algebra") {
  FpSubspace s(5, 3);
  CHECK(s.insert({1, 2, 3}));
  CHECK_FALSE(s.insert({2, 4, 1}));
  CHECK(s.insert({0, 1, 0}));
  CHECK(s.dim() == 2);
  for (const auto& w : s.annihilator())
    for (const auto& v : s.basis()) CHECK((w[0] * v[0] + w[1] * v[1] + w[2] * v[2]) % 5 == 0);
  const auto sol = solve_affine(5, 2, {{1, 1}}, {3});
  REQUIRE(sol.has_value());
  CHECK(sol->directions.size() == 1);
  CHECK_FALSE(solve_affine(5, 1, {{0}}, {1}).has_value());
  // subspaces of F_2^2: 0, three lines, the plane
  CHECK(all_subspaces(2, 2).size() == 5);
}
