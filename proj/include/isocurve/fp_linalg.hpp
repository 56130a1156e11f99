#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "isocurve/modarith.hpp"

namespace isocurve {

using FpVector = std::vector<Int>;

/// Subspace of F_p^n kept in reduced row echelon form.
class FpSubspace {
 public:
  FpSubspace(Int p, std::size_t ambient_dim) : p_(p), n_(ambient_dim) {}

  Int prime() const { return p_; }
  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<FpVector>& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Reduces v against the basis; the result is zero iff v is in the span.
  FpVector reduce(FpVector v) const;
  bool contains(const FpVector& v) const;
  /// Adds v to the span. Returns true if the dimension grew.
  bool insert(FpVector v);

  /// Basis of the annihilator {w : w . v = 0 for all v in span}.
  std::vector<FpVector> annihilator() const;

  friend bool operator==(const FpSubspace& a, const FpSubspace& b) {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  Int p_;
  std::size_t n_;
  std::vector<FpVector> rows_;
  std::vector<std::size_t> pivots_;
};

/// Affine solution set {x0 + span(directions)} of A x = b over F_p.
struct AffineSolution {
  FpVector particular;
  std::vector<FpVector> directions;
};

/// Solves A x = b (A given as rows of length n). Empty optional if inconsistent.
std::optional<AffineSolution> solve_affine(Int p, std::size_t n, const std::vector<FpVector>& rows,
                                           const FpVector& rhs);

/// All subspaces of F_p^n (n small); each returned in RREF.
std::vector<FpSubspace> all_subspaces(Int p, std::size_t n);

}  // namespace isocurve
