#include "isocurve/fp_linalg.hpp"

#include <algorithm>
#include <functional>

namespace isocurve {

namespace {

Int inv_mod_p(Int a, Int p) {
  const PrimePowerModulus m(p, 1);
  return m.inverse(a);
}

}  // namespace

FpVector FpSubspace::reduce(FpVector v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Int f = v[pivots_[i]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < n_; ++j) v[j] = ((v[j] - f * rows_[i][j]) % p_ + p_) % p_;
  }
  return v;
}

bool FpSubspace::contains(const FpVector& v) const {
  const auto r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](Int x) { return x == 0; });
}

bool FpSubspace::insert(FpVector v) {
  for (auto& x : v) x = ((x % p_) + p_) % p_;
  v = reduce(std::move(v));
  const auto it = std::find_if(v.begin(), v.end(), [](Int x) { return x != 0; });
  if (it == v.end()) return false;
  const std::size_t piv = static_cast<std::size_t>(it - v.begin());
  const Int inv = inv_mod_p(v[piv], p_);
  for (auto& x : v) x = x * inv % p_;
  // Clear the new pivot column from existing rows.
  for (auto& row : rows_) {
    const Int f = row[piv];
    if (f == 0) continue;
    for (std::size_t j = 0; j < n_; ++j) row[j] = ((row[j] - f * v[j]) % p_ + p_) % p_;
  }
  const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, piv);
  rows_.insert(rows_.begin() + pos, std::move(v));
  return true;
}

std::vector<FpVector> FpSubspace::annihilator() const {
  std::vector<FpVector> out;
  std::vector<bool> is_pivot(n_, false);
  for (auto c : pivots_) is_pivot[c] = true;
  for (std::size_t free = 0; free < n_; ++free) {
    if (is_pivot[free]) continue;
    // RREF rows r_i with pivot c_i: w with w[free]=1, w[c_i] = -r_i[free]
    // is orthogonal to every row.
    FpVector w(n_, 0);
    w[free] = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) w[pivots_[i]] = (p_ - rows_[i][free]) % p_;
    out.push_back(std::move(w));
  }
  return out;
}

std::optional<AffineSolution> solve_affine(Int p, std::size_t n, const std::vector<FpVector>& rows,
                                           const FpVector& rhs) {
  // Row-reduce the augmented system [A | b].
  FpSubspace aug(p, n + 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    FpVector r = rows[i];
    r.push_back(rhs[i]);
    aug.insert(std::move(r));
  }
  if (!aug.pivots().empty() && aug.pivots().back() == n) return std::nullopt;
  AffineSolution sol;
  sol.particular.assign(n, 0);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t i = 0; i < aug.dim(); ++i) {
    const auto c = aug.pivots()[i];
    is_pivot[c] = true;
    sol.particular[c] = aug.basis()[i][n];
  }
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    FpVector d(n, 0);
    d[free] = 1;
    for (std::size_t i = 0; i < aug.dim(); ++i)
      d[aug.pivots()[i]] = (p - aug.basis()[i][free]) % p;
    sol.directions.push_back(std::move(d));
  }
  return sol;
}

std::vector<FpSubspace> all_subspaces(Int p, std::size_t n) {
  // Enumerate RREF matrices: choose pivot columns, then fill the free
  // entries right of each pivot in non-pivot columns.
  std::vector<FpSubspace> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::size_t> piv;
    for (std::size_t c = 0; c < n; ++c)
      if (mask & (1u << c)) piv.push_back(c);
    std::vector<std::pair<std::size_t, std::size_t>> slots;  // (row, col)
    for (std::size_t i = 0; i < piv.size(); ++i)
      for (std::size_t c = piv[i] + 1; c < n; ++c)
        if (!(mask & (1u << c))) slots.emplace_back(i, c);
    std::vector<Int> vals(slots.size(), 0);
    while (true) {
      FpSubspace s(p, n);
      for (std::size_t i = 0; i < piv.size(); ++i) {
        FpVector r(n, 0);
        r[piv[i]] = 1;
        for (std::size_t k = 0; k < slots.size(); ++k)
          if (slots[k].first == i) r[slots[k].second] = vals[k];
        s.insert(std::move(r));
      }
      out.push_back(std::move(s));
      std::size_t k = 0;
      while (k < vals.size() && ++vals[k] == p) vals[k++] = 0;
      if (k == vals.size()) break;
    }
  }
  return out;
}

}  // namespace isocurve
