#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "isocurve/fp_linalg.hpp"
#include "isocurve/modarith.hpp"

namespace isocurve {

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

/// Enumeration would exceed the configured element cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sorted set of matrices stored as packed keys.
class ElementSet {
 public:
  ElementSet(PrimePowerModulus modulus, std::vector<std::uint64_t> sorted_keys)
      : modulus_(modulus), keys_(std::move(sorted_keys)) {}

  const PrimePowerModulus& modulus() const { return modulus_; }
  std::size_t size() const { return keys_.size(); }
  std::span<const std::uint64_t> keys() const { return keys_; }
  ResidueMatrix at(std::size_t i) const { return ResidueMatrix::from_key(modulus_, keys_[i]); }

  bool contains_key(std::uint64_t key) const;
  bool contains(const ResidueMatrix& m) const { return contains_key(m.key()); }
  /// Index of `key` in sorted order, or size() when absent.
  std::size_t index_of(std::uint64_t key) const;

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.modulus_ == b.modulus_ && a.keys_ == b.keys_;
  }

 private:
  PrimePowerModulus modulus_;
  std::vector<std::uint64_t> keys_;
};

/// Closure of `generators` under multiplication (identity included).
ElementSet close_generators(const PrimePowerModulus& modulus, std::span<const std::uint64_t> generators,
                            std::size_t cap);

enum class Ambient { GL2, SL2 };

Int ambient_order(const PrimePowerModulus& modulus, Ambient family);

/// Units generating (Z/m)^x.
std::vector<Int> unit_group_generators(const PrimePowerModulus& m);

/// Subgroup of GL2(Z/ell^n) given by generators.
///
/// Copies share one lazily filled enumeration cache; the group itself is
/// immutable, so sharing across threads is safe.
class MatrixGroup {
 public:
  MatrixGroup(PrimePowerModulus modulus, std::vector<ResidueMatrix> generators, std::string label = {});

  static MatrixGroup full(const PrimePowerModulus& modulus);
  static MatrixGroup special_linear(const PrimePowerModulus& modulus);
  static MatrixGroup trivial(const PrimePowerModulus& modulus) { return {modulus, {}}; }

  const PrimePowerModulus& modulus() const { return modulus_; }
  const std::vector<ResidueMatrix>& generators() const { return generators_; }
  const std::string& label() const { return label_; }
  MatrixGroup with_label(std::string label) const;

  /// Full element set; throws CapExceeded beyond `cap`.
  const ElementSet& elements(std::size_t cap = kDefaultEnumerationCap) const;

  /// Group order, computed layer by layer so only the mod-ell^(n-1)
  /// image needs to be enumerated.
  Int order(std::size_t cap = kDefaultEnumerationCap) const;

  bool contains(const ResidueMatrix& m, std::size_t cap = kDefaultEnumerationCap) const;
  std::vector<std::uint64_t> generator_keys() const;

 private:
  struct Cache;
  PrimePowerModulus modulus_;
  std::vector<ResidueMatrix> generators_;
  std::string label_;
  std::shared_ptr<Cache> cache_;
};

/// Kernel of reduction (g mod ell^(d+1)) -> (g mod ell^d), d >= 1, as a
/// subspace of M2(F_ell) via I + ell^d X <-> X (coordinates x11,x12,x21,x22).
FpSubspace kernel_layer(const MatrixGroup& g, int d, std::size_t cap = kDefaultEnumerationCap);

std::size_t enumerate_size(const MatrixGroup& g, std::size_t cap = kDefaultEnumerationCap);
Int index_in_ambient(const MatrixGroup& g, std::size_t cap = kDefaultEnumerationCap);
PrimePowerModulus level(const MatrixGroup& g, std::size_t cap = kDefaultEnumerationCap);

/// Determinant image as a sorted list of units.
struct DetImage {
  std::vector<Int> units;
  bool surjective = false;
};
DetImage det_image(const MatrixGroup& g);

MatrixGroup adjoin_minus_identity(const MatrixGroup& g);
bool contains_minus_identity(const MatrixGroup& g, std::size_t cap = kDefaultEnumerationCap);
MatrixGroup reduce_group(const MatrixGroup& g, const PrimePowerModulus& target);
MatrixGroup full_preimage(const MatrixGroup& g, const PrimePowerModulus& target);

/// SL2-intersection (of the ±-closed group when `plus_minus`) as an element set.
ElementSet sl2_part(const MatrixGroup& g, bool plus_minus, std::size_t cap = kDefaultEnumerationCap);

/// Result of a conjugacy search; `witness` c satisfies c g c^-1 (sub)= h.
struct ConjugacyResult {
  bool found = false;
  std::optional<ResidueMatrix> witness;
};

ResidueMatrix conjugate(const ResidueMatrix& c, const ResidueMatrix& x);
MatrixGroup conjugate_group(const ResidueMatrix& c, const MatrixGroup& g);

/// Searches c in GL2 with c g c^-1 = h.
ConjugacyResult is_conjugate(const MatrixGroup& g, const MatrixGroup& h,
                             std::size_t cap = kDefaultEnumerationCap);
/// Searches c in GL2 with c h c^-1 a subset of `big`.
ConjugacyResult conjugate_into(const MatrixGroup& h, const MatrixGroup& big,
                               std::size_t cap = kDefaultEnumerationCap);

enum class CartanKind { Nonsplit, NonsplitNormalizer, Split, SplitNormalizer, Borel, Section4Semidirect };

struct CartanSpec {
  CartanKind kind;
  PrimePowerModulus modulus;
  std::optional<Int> epsilon;  // nonsplit kinds; defaults to the smallest non-residue
};

CartanKind parse_cartan_kind(const std::string& text);
std::string to_string(CartanKind kind);

MatrixGroup build_cartan(const CartanSpec& spec);

}  // namespace isocurve
