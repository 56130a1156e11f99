#include "isocurve/lattice.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace isocurve {

namespace {

using Keys = std::vector<std::uint64_t>;

struct KeysHash {
  std::size_t operator()(const Keys& v) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto k : v) h = (h ^ k) * 0x100000001b3ull;
    return static_cast<std::size_t>(h);
  }
};

// Row-major 4x4 over F_ell acting on vec(X) = (x11, x12, x21, x22).
using Mat4 = std::array<Int, 16>;

Mat4 conj_matrix(const ResidueMatrix& a) {
  const auto& mod = a.modulus();
  const auto ai = mat_inv(a);
  Mat4 c{};
  for (int j = 0; j < 4; ++j) {
    const ResidueMatrix e(mod, j == 0, j == 1, j == 2, j == 3);
    const auto img = (a * e * ai).entries();
    for (int i = 0; i < 4; ++i) c[i * 4 + j] = img[i];
  }
  return c;
}

FpVector apply(const Mat4& c, const FpVector& v, Int ell) {
  FpVector out(4, 0);
  for (int i = 0; i < 4; ++i) {
    Int s = 0;
    for (int j = 0; j < 4; ++j) s += c[i * 4 + j] * v[j];
    out[i] = s % ell;
  }
  return out;
}

Int trace_of(const FpVector& v, Int ell) { return (v[0] + v[3]) % ell; }

ResidueMatrix mod_ell(const ResidueMatrix& x) { return reduce_matrix(x, x.modulus().with_exponent(1)); }

std::uint64_t inverse_key(std::uint64_t key, const PrimePowerModulus& mod) {
  return mat_inv(ResidueMatrix::from_key(mod, key)).key();
}

// I + ell^d X at modulus `top`.
std::uint64_t kernel_element(const FpVector& x, Int scale, const PrimePowerModulus& top) {
  return ResidueMatrix(top, 1 + scale * x[0], scale * x[1], scale * x[2], 1 + scale * x[3]).key();
}

class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  void spend(std::size_t n, const char* what) {
    used_ += n;
    if (used_ > limit_)
      throw SearchBudgetExceeded(std::string(what) + ": search budget of " + std::to_string(limit_) +
                                 " candidates exhausted");
  }

 private:
  std::size_t limit_;
  std::atomic<std::size_t> used_{0};
};

// Lifting problem for a bottom group B <= GL2(Z/ell^d): generator lifts
// X_i mod ell^(d+1) are adjusted to X_i (I + ell^d k_i) with k_i = basis . z_i.
// Every Schreier relator then evaluates to I + ell^d (c + phi z); the span
// of the matrices [phi | c] is all that the subspace tests need.
struct LiftSystem {
  Int ell = 0;
  Int scale = 0;  // ell^d
  PrimePowerModulus top{2, 1};
  std::vector<std::uint64_t> lifts;  // at `top`
  std::vector<FpVector> basis;       // q vectors in F_ell^4
  std::size_t r = 0, q = 0;
  FpSubspace span{2, 1};

  std::size_t unknowns() const { return r * q; }

  FpVector kernel_vector(const FpVector& z, std::size_t i) const {
    FpVector k(4, 0);
    for (std::size_t j = 0; j < q; ++j)
      for (int a = 0; a < 4; ++a) k[a] = (k[a] + basis[j][a] * z[i * q + j]) % ell;
    return k;
  }

  std::vector<std::uint64_t> generators(const FpVector& z, const FpSubspace& u) const {
    const auto mt = static_cast<std::uint64_t>(top.value());
    std::vector<std::uint64_t> gens;
    for (std::size_t i = 0; i < r; ++i)
      gens.push_back(packed::mul(lifts[i], kernel_element(kernel_vector(z, i), scale, top), mt));
    for (const auto& v : u.basis()) gens.push_back(kernel_element(v, scale, top));
    return gens;
  }
};

LiftSystem build_lift_system(const MatrixGroup& bottom, const std::vector<std::uint64_t>& lifts,
                             const std::vector<FpVector>& basis, std::size_t cap) {
  const auto& mb_mod = bottom.modulus();
  LiftSystem sys;
  sys.ell = mb_mod.ell();
  sys.scale = mb_mod.value();
  sys.top = mb_mod.with_exponent(mb_mod.exponent() + 1);
  sys.lifts = lifts;
  sys.basis = basis;
  sys.r = lifts.size();
  sys.q = basis.size();
  const std::size_t width = sys.r * sys.q + 1;
  sys.span = FpSubspace(sys.ell, 4 * width);
  const Int ell = sys.ell;
  const auto mb = static_cast<std::uint64_t>(mb_mod.value());
  const auto mt = static_cast<std::uint64_t>(sys.top.value());
  const auto residue = mb_mod.with_exponent(1);

  const auto& els = bottom.elements(cap);
  const std::size_t n = els.size();
  const std::size_t cols = sys.r * sys.q;

  std::unordered_map<std::uint64_t, Mat4> conj_cache;
  auto conj_of = [&](std::uint64_t key_top) -> const Mat4& {
    const auto k = packed::reduce(key_top, static_cast<std::uint64_t>(ell));
    auto it = conj_cache.find(k);
    if (it == conj_cache.end()) it = conj_cache.emplace(k, conj_matrix(ResidueMatrix::from_key(residue, k))).first;
    return it->second;
  };

  std::vector<std::uint64_t> bottom_gens;
  std::vector<Mat4> gen_inv_conj;
  for (auto x : lifts) {
    bottom_gens.push_back(packed::reduce(x, mb));
    gen_inv_conj.push_back(conj_matrix(mat_inv(ResidueMatrix::from_key(residue, packed::reduce(x, ell)))));
  }

  // L matrices: 4 x cols, row-major.
  std::vector<std::uint64_t> lift_of(n, 0);
  std::vector<std::vector<Int>> coeff(n);
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> queue;
  const auto id = els.index_of(packed::kIdentity);
  seen[id] = true;
  lift_of[id] = packed::kIdentity;
  coeff[id].assign(4 * cols, 0);
  queue.push_back(id);

  std::vector<Int> next(4 * cols), diff(4 * cols), row(4 * width);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto xi = queue[head];
    for (std::size_t g = 0; g < sys.r; ++g) {
      const auto& c = gen_inv_conj[g];
      for (int a = 0; a < 4; ++a)
        for (std::size_t j = 0; j < cols; ++j) {
          Int s = 0;
          for (int b = 0; b < 4; ++b) s += c[a * 4 + b] * coeff[xi][b * cols + j];
          next[a * cols + j] = s % ell;
        }
      for (std::size_t j = 0; j < sys.q; ++j)
        for (int a = 0; a < 4; ++a) {
          auto& e = next[a * cols + g * sys.q + j];
          e = (e + basis[j][a]) % ell;
        }
      const auto lifted = packed::mul(lift_of[xi], lifts[g], mt);
      const auto yi = els.index_of(packed::mul(els.keys()[xi], bottom_gens[g], mb));
      if (!seen[yi]) {
        seen[yi] = true;
        lift_of[yi] = lifted;
        coeff[yi] = next;
        queue.push_back(yi);
        continue;
      }
      // relator: (lifted, next) * (lift_y, L_y)^-1 = (lifted lift_y^-1, y (next - L_y) y^-1)
      const auto rel = packed::mul(lifted, inverse_key(lift_of[yi], sys.top), mt);
      const auto& cy = conj_of(lift_of[yi]);
      for (std::size_t k = 0; k < 4 * cols; ++k) diff[k] = (next[k] - coeff[yi][k] + ell) % ell;
      for (int a = 0; a < 4; ++a) {
        for (std::size_t j = 0; j < cols; ++j) {
          Int s = 0;
          for (int b = 0; b < 4; ++b) s += cy[a * 4 + b] * diff[b * cols + j];
          row[a * width + j] = s % ell;
        }
        const Int entry = static_cast<Int>(packed::entry(rel, a)) - ((a == 0 || a == 3) ? 1 : 0);
        row[a * width + cols] = ((entry / sys.scale) % ell + ell) % ell;
      }
      sys.span.insert(row);
    }
  }
  return sys;
}

// Solutions z of "every relator lands in I + ell^d U".
std::optional<AffineSolution> solve_for(const LiftSystem& sys, const FpSubspace& u) {
  const std::size_t cols = sys.unknowns(), width = cols + 1;
  std::vector<FpVector> rows;
  FpVector rhs;
  for (const auto& lambda : u.annihilator())
    for (const auto& rel : sys.span.basis()) {
      FpVector eq(cols, 0);
      Int constant = 0;
      for (int a = 0; a < 4; ++a) {
        if (lambda[a] == 0) continue;
        for (std::size_t j = 0; j < cols; ++j) eq[j] = (eq[j] + lambda[a] * rel[a * width + j]) % sys.ell;
        constant = (constant + lambda[a] * rel[a * width + cols]) % sys.ell;
      }
      rows.push_back(std::move(eq));
      rhs.push_back((sys.ell - constant) % sys.ell);
    }
  return solve_affine(sys.ell, cols, rows, rhs);
}

// Solution directions that are not absorbed by shifting k_i inside U.
std::vector<FpVector> free_directions(const LiftSystem& sys, const FpSubspace& u, const AffineSolution& sol) {
  FpSubspace absorbed(sys.ell, sys.unknowns());
  // coordinates of U inside span(basis)
  std::vector<FpVector> basis_rows(4, FpVector(sys.q));
  for (std::size_t j = 0; j < sys.q; ++j)
    for (int a = 0; a < 4; ++a) basis_rows[a][j] = sys.basis[j][a];
  for (const auto& v : u.basis()) {
    const auto coords = solve_affine(sys.ell, sys.q, basis_rows, v);
    if (!coords) throw std::logic_error("kernel subspace not inside the allowed layer");
    for (std::size_t i = 0; i < sys.r; ++i) {
      FpVector z(sys.unknowns(), 0);
      for (std::size_t j = 0; j < sys.q; ++j) z[i * sys.q + j] = coords->particular[j];
      absorbed.insert(std::move(z));
    }
  }
  std::vector<FpVector> free;
  for (const auto& d : sol.directions)
    if (absorbed.insert(d)) free.push_back(d);
  return free;
}

FpVector add_scaled(FpVector a, const FpVector& d, Int c, Int ell) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] + c * d[i]) % ell;
  return a;
}

bool units_generate_all(const std::vector<Int>& gens, const PrimePowerModulus& mod) {
  const Int m = mod.value();
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  std::vector<Int> found{1};
  seen[1] = true;
  for (std::size_t h = 0; h < found.size(); ++h)
    for (Int g : gens) {
      const Int y = found[h] * g % m;
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        found.push_back(y);
      }
    }
  return static_cast<Int>(found.size()) == mod.unit_count();
}

Keys conjugate_keys(const Keys& s, std::uint64_t c, std::uint64_t ci, std::uint64_t m) {
  Keys out;
  out.reserve(s.size());
  for (auto x : s) out.push_back(packed::mul(packed::mul(c, x, m), ci, m));
  std::sort(out.begin(), out.end());
  return out;
}

struct FoundClass {
  Keys rep;  // least member of the conjugacy orbit
  Int class_size = 0;
};

// Collects subgroups up to conjugation by `parent`.
class ClassCollector {
 public:
  explicit ClassCollector(const MatrixGroup& parent) : mod_(parent.modulus()) {
    const auto m = static_cast<std::uint64_t>(mod_.value());
    m_ = m;
    for (auto g : parent.generator_keys()) {
      gens_.push_back(g);
      inv_.push_back(inverse_key(g, mod_));
    }
  }

  bool seen(const Keys& s) const { return seen_.count(s) != 0; }

  // Returns the index of the new class, or nullopt when already known.
  std::optional<std::size_t> add(const Keys& s) {
    if (seen_.count(s)) return std::nullopt;
    std::vector<Keys> orbit{s};
    seen_.insert(s);
    for (std::size_t h = 0; h < orbit.size(); ++h)
      for (std::size_t i = 0; i < gens_.size(); ++i) {
        auto t = conjugate_keys(orbit[h], gens_[i], inv_[i], m_);
        if (seen_.insert(t).second) orbit.push_back(std::move(t));
      }
    FoundClass fc;
    fc.rep = *std::min_element(orbit.begin(), orbit.end());
    fc.class_size = static_cast<Int>(orbit.size());
    classes_.push_back(std::move(fc));
    return classes_.size() - 1;
  }

  const std::vector<FoundClass>& classes() const { return classes_; }

 private:
  PrimePowerModulus mod_;
  std::uint64_t m_ = 0;
  std::vector<std::uint64_t> gens_, inv_;
  std::unordered_set<Keys, KeysHash> seen_;
  std::vector<FoundClass> classes_;
};

Keys closure_keys(const PrimePowerModulus& mod, const std::vector<std::uint64_t>& gens, std::size_t cap) {
  const auto set = close_generators(mod, gens, cap);
  return Keys(set.keys().begin(), set.keys().end());
}

bool det_surjective_keys(const Keys& gens, const PrimePowerModulus& mod) {
  std::vector<Int> dets;
  for (auto k : gens) dets.push_back(static_cast<Int>(packed::det(k, static_cast<std::uint64_t>(mod.value()))));
  return units_generate_all(dets, mod);
}

struct Layered {
  FoundClass cls;
  Int index = 0;
};

// Classes of det-surjective subgroups (index 1 included) of a group mod ell.
std::vector<Layered> base_classes(const MatrixGroup& g, Int bound, const LatticeOptions& opts, Budget& budget) {
  const auto& mod = g.modulus();
  const auto& els = g.elements(opts.cap);
  const Int order = static_cast<Int>(els.size());
  if (opts.same_reduction) {
    if (!det_image(g).surjective) return {};
    return {{{Keys(els.keys().begin(), els.keys().end()), 1}, 1}};
  }
  const auto m = static_cast<std::uint64_t>(mod.value());
  // one generator per cyclic subgroup
  std::vector<std::uint64_t> cyclic;
  std::unordered_set<Keys, KeysHash> cyclic_seen;
  for (auto x : els.keys()) {
    Keys powers{packed::kIdentity};
    for (auto y = x; y != packed::kIdentity; y = packed::mul(y, x, m)) powers.push_back(y);
    std::sort(powers.begin(), powers.end());
    if (cyclic_seen.insert(std::move(powers)).second) cyclic.push_back(x);
  }

  ClassCollector collector(g);
  std::vector<std::vector<std::uint64_t>> class_gens;
  collector.add(Keys{packed::kIdentity});
  class_gens.emplace_back();
  std::vector<Keys> members{Keys{packed::kIdentity}};
  for (std::size_t c = 0; c < class_gens.size(); ++c) {
    for (auto x : cyclic) {
      if (std::binary_search(members[c].begin(), members[c].end(), x)) continue;
      auto gens = class_gens[c];
      gens.push_back(x);
      budget.spend(1, "subgroup enumeration");
      auto t = closure_keys(mod, gens, opts.cap);
      if (collector.seen(t)) continue;
      collector.add(t);
      class_gens.push_back(std::move(gens));
      members.push_back(std::move(t));
    }
  }
  std::vector<Layered> out;
  for (const auto& fc : collector.classes()) {
    const Int idx = order / static_cast<Int>(fc.rep.size());
    if (idx > bound) continue;
    std::vector<Int> dets;
    for (auto k : fc.rep) dets.push_back(static_cast<Int>(packed::det(k, m)));
    if (!units_generate_all(dets, mod)) continue;
    out.push_back({fc, idx});
  }
  return out;
}

const std::vector<FpSubspace>& subspaces_of_f4(Int ell) {
  static std::mutex mu;
  static std::map<Int, std::vector<FpSubspace>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(ell);
  if (it == cache.end()) it = cache.emplace(ell, all_subspaces(ell, 4)).first;
  return it->second;
}

bool stable_under(const FpSubspace& u, const std::vector<Mat4>& action) {
  for (const auto& c : action)
    for (const auto& v : u.basis())
      if (!u.contains(apply(c, v, u.prime()))) return false;
  return true;
}

bool contains_subspace(const FpSubspace& big, const FpSubspace& small) {
  for (const auto& v : small.basis())
    if (!big.contains(v)) return false;
  return true;
}

std::vector<Layered> layered_classes(const MatrixGroup& g, Int bound, const LatticeOptions& opts, Budget& budget) {
  const auto& mod = g.modulus();
  if (mod.exponent() <= 1) return base_classes(g, bound, opts, budget);
  const Int ell = mod.ell();
  const auto lower_mod = mod.with_exponent(mod.exponent() - 1);
  const auto lower_group = reduce_group(g, lower_mod);
  const auto lower = layered_classes(lower_group, bound, opts, budget);
  const auto layer = kernel_layer(g, mod.exponent() - 1, opts.cap);
  const auto& els = g.elements(opts.cap);
  const Int order = static_cast<Int>(els.size());
  const auto m = static_cast<std::uint64_t>(mod.value());
  const auto mb = static_cast<std::uint64_t>(lower_mod.value());

  std::vector<FpSubspace> inside;
  for (const auto& u : subspaces_of_f4(ell))
    if (contains_subspace(layer, u)) inside.push_back(u);

  ClassCollector collector(g);
  std::vector<Int> index_of_class;
  for (const auto& lc : lower) {
    const auto bottom = MatrixGroup(lower_mod, extract_generators(lower_mod, lc.cls.rep));
    std::vector<std::uint64_t> lifts;
    std::vector<Mat4> action;
    for (const auto& y : bottom.generators()) {
      const auto yk = y.key();
      const auto it = std::find_if(els.keys().begin(), els.keys().end(),
                                   [&](std::uint64_t x) { return packed::reduce(x, mb) == yk; });
      if (it == els.keys().end()) throw std::logic_error("class representative does not lift into the group");
      lifts.push_back(*it);
      action.push_back(conj_matrix(mod_ell(y)));
    }
    const auto sys = build_lift_system(bottom, lifts, layer.basis(), opts.cap);
    for (const auto& u : inside) {
      Int idx = lc.index;
      for (std::size_t d = u.dim(); d < layer.dim(); ++d) idx *= ell;
      if (idx > bound || !stable_under(u, action)) continue;
      const auto sol = solve_for(sys, u);
      if (!sol) continue;
      const auto free = free_directions(sys, u, *sol);
      std::size_t combos = 1;
      for (std::size_t i = 0; i < free.size(); ++i) {
        combos *= static_cast<std::size_t>(ell);
        if (combos > (std::size_t{1} << 40)) break;
      }
      budget.spend(combos, "complement enumeration");
      std::vector<Int> digits(free.size(), 0);
      for (std::size_t c = 0; c < combos; ++c) {
        FpVector z = sol->particular;
        for (std::size_t i = 0; i < free.size(); ++i) z = add_scaled(std::move(z), free[i], digits[i], ell);
        for (std::size_t i = 0; i < digits.size() && ++digits[i] == ell; ++i) digits[i] = 0;
        const auto gens = sys.generators(z, u);
        if (!det_surjective_keys(gens, mod)) continue;
        auto keys = closure_keys(mod, gens, opts.cap);
        if (order / static_cast<Int>(keys.size()) != idx)
          throw std::logic_error("lifted subgroup has unexpected order");
        if (collector.seen(keys)) continue;
        collector.add(keys);
        index_of_class.push_back(idx);
      }
    }
  }
  std::vector<Layered> out;
  for (std::size_t i = 0; i < collector.classes().size(); ++i) out.push_back({collector.classes()[i], index_of_class[i]});
  (void)m;
  return out;
}

}  // namespace

std::vector<ResidueMatrix> extract_generators(const PrimePowerModulus& mod, const std::vector<std::uint64_t>& keys) {
  std::vector<std::uint64_t> gens;
  ElementSet span(mod, {packed::kIdentity});
  for (auto k : keys) {
    if (span.size() == keys.size()) break;
    if (span.contains_key(k)) continue;
    gens.push_back(k);
    span = close_generators(mod, gens, keys.size() + 1);
  }
  std::vector<ResidueMatrix> out;
  for (auto k : gens) out.push_back(ResidueMatrix::from_key(mod, k));
  return out;
}

std::vector<SubgroupClass> proper_detsurjective_subgroups(const MatrixGroup& g, Int index_bound,
                                                          const LatticeOptions& opts) {
  if (g.modulus().is_level_one()) return {};
  Budget budget(opts.max_candidates);
  auto found = layered_classes(g, index_bound, opts, budget);
  std::sort(found.begin(), found.end(),
            [](const Layered& a, const Layered& b) { return std::tie(a.index, a.cls.rep) < std::tie(b.index, b.cls.rep); });
  std::vector<SubgroupClass> out;
  for (const auto& f : found) {
    if (f.index == 1) continue;
    MatrixGroup rep(g.modulus(), extract_generators(g.modulus(), f.cls.rep));
    out.push_back({rep, f.index, true, f.cls.class_size});
  }
  return out;
}

std::vector<std::vector<std::uint64_t>> all_subgroups_bruteforce(const MatrixGroup& g, std::size_t max_generators) {
  const auto& mod = g.modulus();
  const auto& els = g.elements();
  std::set<Keys> found{Keys{packed::kIdentity}};
  std::vector<std::uint64_t> pick;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (!pick.empty()) found.insert(closure_keys(mod, pick, els.size() + 1));
    if (pick.size() == max_generators) return;
    for (std::size_t i = start; i < els.size(); ++i) {
      pick.push_back(els.keys()[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return {found.begin(), found.end()};
}

KernelModule KernelModule::of(const MatrixGroup& parent) {
  KernelModule k;
  k.ell = parent.modulus().ell();
  for (const auto& x : parent.generators()) k.action.push_back(mod_ell(x));
  return k;
}

bool KernelModule::is_stable(const FpSubspace& u) const {
  std::vector<Mat4> act;
  for (const auto& a : action) act.push_back(conj_matrix(a));
  return stable_under(u, act);
}

std::vector<FpSubspace> KernelModule::stable_subspaces() const {
  std::vector<Mat4> act;
  for (const auto& a : action) act.push_back(conj_matrix(a));
  std::vector<FpSubspace> out;
  for (const auto& u : subspaces_of_f4(ell))
    if (stable_under(u, act)) out.push_back(u);
  return out;
}

CartanMembership split_cartan_membership(const MatrixGroup& h, std::size_t cap) {
  const auto big = build_cartan({CartanKind::SplitNormalizer, h.modulus(), std::nullopt});
  const auto r = conjugate_into(h, big, cap);
  CartanMembership out;
  out.contained = r.found;
  out.witness = r.witness;
  if (r.found) out.index = big.order(cap) / h.order(cap);
  return out;
}

bool is_rigidity_counterexample(const MatrixGroup& h, const MatrixGroup& g, std::size_t cap) {
  const auto& mod = g.modulus();
  if (h.modulus() != mod.with_exponent(mod.exponent() + 1)) return false;
  const auto reduced = reduce_group(h, mod);
  if (reduced.elements(cap) != g.elements(cap)) return false;
  if (!det_image(h).surjective) return false;
  const Int l2 = mod.ell() * mod.ell();
  const Int full = g.order(cap) * l2 * l2;
  return h.order(cap) < full;
}

RigidityResult preimage_rigidity(const MatrixGroup& g, int target_exponent, const LatticeOptions& opts) {
  const auto& mod = g.modulus();
  if (mod.exponent() < 1 || target_exponent != mod.exponent() + 1)
    throw ArithmeticError("preimage rigidity checks exactly one level above the group's modulus");
  RigidityResult result;
  if (!det_image(g).surjective) {
    result.det_surjective_base = false;
    return result;
  }
  const Int ell = mod.ell();
  const auto top = mod.with_exponent(target_exponent);
  std::vector<std::uint64_t> lifts;
  for (const auto& x : g.generators()) lifts.push_back(ResidueMatrix(top, x.entries()).key());
  std::vector<FpVector> basis;
  for (int i = 0; i < 4; ++i) {
    FpVector e(4, 0);
    e[i] = 1;
    basis.push_back(e);
  }
  const auto sys = build_lift_system(g, lifts, basis, opts.cap);
  auto subspaces = KernelModule::of(g).stable_subspaces();
  std::erase_if(subspaces, [](const FpSubspace& u) { return u.dim() == 4; });
  std::stable_sort(subspaces.begin(), subspaces.end(),
                   [](const FpSubspace& a, const FpSubspace& b) { return a.dim() > b.dim(); });
  result.stable_subspaces = subspaces.size();

  Budget budget(opts.max_candidates);
  const bool odd_automatic = ell != 2 && mod.exponent() >= 2;

  // A determinant-surjective lift for subspace u, if any.
  auto lift_for = [&](const FpSubspace& u) -> std::optional<std::vector<std::uint64_t>> {
    const auto sol = solve_for(sys, u);
    if (!sol) return std::nullopt;
    const bool trace_in_u =
        std::any_of(u.basis().begin(), u.basis().end(), [&](const FpVector& v) { return trace_of(v, ell) != 0; });
    if (trace_in_u || odd_automatic) return sys.generators(sol->particular, u);
    // det h_i = det(X_i) (1 + ell^n tr k_i); only the traces matter.
    auto traces = [&](const FpVector& z) {
      FpVector t(sys.r);
      for (std::size_t i = 0; i < sys.r; ++i) t[i] = trace_of(sys.kernel_vector(z, i), ell);
      return t;
    };
    FpSubspace seen_t(ell, sys.r);
    std::vector<FpVector> dirs;
    for (const auto& d : sol->directions) {
      auto t = traces(d);
      if (seen_t.insert(t)) dirs.push_back(d);
    }
    std::size_t combos = 1;
    for (std::size_t i = 0; i < dirs.size(); ++i) combos *= static_cast<std::size_t>(ell);
    budget.spend(combos, "determinant lift search");
    std::vector<Int> digits(dirs.size(), 0);
    const auto mt = static_cast<std::uint64_t>(top.value());
    for (std::size_t c = 0; c < combos; ++c) {
      FpVector z = sol->particular;
      for (std::size_t i = 0; i < dirs.size(); ++i) z = add_scaled(std::move(z), dirs[i], digits[i], ell);
      for (std::size_t i = 0; i < digits.size() && ++digits[i] == ell; ++i) digits[i] = 0;
      auto gens = sys.generators(z, u);
      std::vector<Int> dets;
      for (auto k : gens) dets.push_back(static_cast<Int>(packed::det(k, mt)));
      if (units_generate_all(dets, top)) return gens;
    }
    return std::vector<std::uint64_t>{};  // liftable, but never det-surjective
  };

  std::vector<std::optional<std::vector<std::uint64_t>>> outcome(subspaces.size());
  std::atomic<std::size_t> next{0}, best{subspaces.size()};
  std::mutex err_mu;
  std::exception_ptr error;
  auto worker = [&] {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < subspaces.size();) {
        outcome[i] = lift_for(subspaces[i]);
        if (outcome[i] && !outcome[i]->empty()) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(err_mu);
      if (!error) error = std::current_exception();
    }
  };
  const unsigned threads = std::max(1u, opts.threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  const std::size_t hit = best.load();
  for (const auto& o : outcome)
    if (o) ++result.liftable;
  if (hit < subspaces.size()) {
    std::vector<ResidueMatrix> gens;
    for (auto k : *outcome[hit]) gens.push_back(ResidueMatrix::from_key(top, k));
    MatrixGroup h(top, std::move(gens));
    if (!is_rigidity_counterexample(h, g, opts.cap))
      throw std::logic_error("constructed lift failed verification");
    result.rigid = false;
    result.counterexample = std::move(h);
  }
  return result;
}

}  // namespace isocurve
