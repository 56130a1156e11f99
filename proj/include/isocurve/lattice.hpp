#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "isocurve/fp_linalg.hpp"
#include "isocurve/gl2.hpp"

namespace isocurve {

/// A lattice search ran out of its configured budget. Never swallowed:
/// an incomplete search cannot certify anything.
class SearchBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LatticeOptions {
  std::size_t cap = kDefaultEnumerationCap;
  // Raw candidate subgroups (or determinant patterns) examined per search.
  std::size_t max_candidates = 5'000'000;
  // Keep only subgroups whose mod-ell reduction is the parent's.
  bool same_reduction = false;
  unsigned threads = 1;
};

struct SubgroupClass {
  MatrixGroup representative;
  Int index_in_parent = 0;
  bool det_surjective = false;
  Int class_size = 0;  // number of parent-conjugates
};

/// Conjugacy classes (under g) of proper subgroups H <= g with surjective
/// determinant and [g : H] <= index_bound, sorted by index. Works one
/// kernel layer at a time: classes of g mod ell^(n-1), then stable
/// subspaces of the kernel layer, then every complement.
std::vector<SubgroupClass> proper_detsurjective_subgroups(const MatrixGroup& g, Int index_bound,
                                                          const LatticeOptions& opts = {});

/// All subgroups of a small group, as sorted element keys; brute force.
/// Used to cross-check the layered search.
std::vector<std::vector<std::uint64_t>> all_subgroups_bruteforce(const MatrixGroup& g,
                                                                 std::size_t max_generators = 3);

/// Kernel of GL2(Z/ell^(n+1)) -> GL2(Z/ell^n) as F_ell^4 (I + ell^n X <-> X),
/// acted on by conjugation through the parent's mod-ell image.
struct KernelModule {
  Int ell = 0;
  std::vector<ResidueMatrix> action;  // parent generators mod ell

  static KernelModule of(const MatrixGroup& parent);
  bool is_stable(const FpSubspace& u) const;
  std::vector<FpSubspace> stable_subspaces() const;
};

struct CartanMembership {
  bool contained = false;
  Int index = 0;  // [C_s^+ : c h c^-1] when contained
  std::optional<ResidueMatrix> witness;
};

CartanMembership split_cartan_membership(const MatrixGroup& h, std::size_t cap = kDefaultEnumerationCap);

struct RigidityResult {
  bool rigid = true;
  std::optional<MatrixGroup> counterexample;
  std::size_t stable_subspaces = 0;  // proper stable subspaces examined
  std::size_t liftable = 0;          // of those, how many admit a lift of g
  bool det_surjective_base = true;   // false makes the statement vacuous
};

/// Decides whether some proper H <= full_preimage(g, ell^target_exponent)
/// with H mod ell^n = g and surjective determinant exists.
/// target_exponent must be n + 1.
RigidityResult preimage_rigidity(const MatrixGroup& g, int target_exponent, const LatticeOptions& opts = {});

/// Reduction equals g, determinant surjective, strictly smaller than the
/// full preimage.
bool is_rigidity_counterexample(const MatrixGroup& h, const MatrixGroup& g, std::size_t cap = kDefaultEnumerationCap);

/// Small generating set of the group with the given sorted elements.
std::vector<ResidueMatrix> extract_generators(const PrimePowerModulus& mod, const std::vector<std::uint64_t>& keys);

}  // namespace isocurve
