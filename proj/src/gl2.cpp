#include "isocurve/gl2.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace isocurve {

namespace {

// Dense bitmaps are used for BFS visited sets up to this many bits.
constexpr std::uint64_t kDenseBitLimit = std::uint64_t{1} << 28;

std::uint64_t packed_inverse(std::uint64_t x, const PrimePowerModulus& m) {
  const auto mv = static_cast<std::uint64_t>(m.value());
  const Int di = m.inverse(static_cast<Int>(packed::det(x, mv)));
  const auto d = static_cast<std::uint64_t>(di);
  auto neg = [mv](std::uint64_t v) { return v == 0 ? 0 : mv - v; };
  return packed::pack(packed::entry(x, 3) * d % mv, neg(packed::entry(x, 1)) * d % mv,
                      neg(packed::entry(x, 2)) * d % mv, packed::entry(x, 0) * d % mv);
}

void check_packable(const PrimePowerModulus& m) {
  if (m.value() > kMaxPackedModulus)
    throw CapExceeded("modulus " + m.to_string() + " is too large to enumerate");
}

}  // namespace

bool ElementSet::contains_key(std::uint64_t key) const {
  return std::binary_search(keys_.begin(), keys_.end(), key);
}

std::size_t ElementSet::index_of(std::uint64_t key) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  return (it != keys_.end() && *it == key) ? static_cast<std::size_t>(it - keys_.begin()) : keys_.size();
}

ElementSet close_generators(const PrimePowerModulus& modulus, std::span<const std::uint64_t> generators,
                            std::size_t cap) {
  check_packable(modulus);
  const auto m = static_cast<std::uint64_t>(modulus.value());
  const std::uint64_t id = modulus.is_level_one() ? 0 : packed::kIdentity;
  std::vector<std::uint64_t> found{id};
  std::vector<std::uint64_t> gens(generators.begin(), generators.end());
  if (modulus.is_level_one()) return ElementSet(modulus, std::move(found));

  const std::uint64_t space = m * m * m * m;
  auto too_many = [&] {
    throw CapExceeded("group enumeration exceeded cap of " + std::to_string(cap) + " elements");
  };
  if (space <= kDenseBitLimit) {
    std::vector<bool> seen(space, false);
    seen[packed::dense(id, m)] = true;
    for (std::size_t head = 0; head < found.size(); ++head) {
      const std::uint64_t x = found[head];
      for (auto g : gens) {
        const std::uint64_t y = packed::mul(x, g, m);
        const auto d = packed::dense(y, m);
        if (seen[d]) continue;
        seen[d] = true;
        found.push_back(y);
        if (found.size() > cap) too_many();
      }
    }
  } else {
    std::unordered_set<std::uint64_t> seen{id};
    for (std::size_t head = 0; head < found.size(); ++head) {
      const std::uint64_t x = found[head];
      for (auto g : gens) {
        const std::uint64_t y = packed::mul(x, g, m);
        if (!seen.insert(y).second) continue;
        found.push_back(y);
        if (found.size() > cap) too_many();
      }
    }
  }
  std::sort(found.begin(), found.end());
  return ElementSet(modulus, std::move(found));
}

Int ambient_order(const PrimePowerModulus& modulus, Ambient family) {
  if (modulus.exponent() < 1) throw ArithmeticError("ambient order needs exponent >= 1");
  return family == Ambient::GL2 ? gl2_order(modulus) : sl2_order(modulus);
}

std::vector<Int> unit_group_generators(const PrimePowerModulus& m) {
  if (m.exponent() == 0) return {};
  if (m.ell() == 2) {
    if (m.exponent() == 1) return {};
    if (m.exponent() == 2) return {3};
    return {m.value() - 1, 5};
  }
  const Int phi = m.unit_count();
  for (Int g = 2; g < m.value(); ++g)
    if (m.is_unit(g) && m.unit_order(g) == phi) return {g};
  throw ArithmeticError("no primitive root found");
}

struct MatrixGroup::Cache {
  std::mutex mu;
  std::shared_ptr<const ElementSet> elements;
  std::optional<Int> order;
};

MatrixGroup::MatrixGroup(PrimePowerModulus modulus, std::vector<ResidueMatrix> generators, std::string label)
    : modulus_(modulus), generators_(std::move(generators)), label_(std::move(label)),
      cache_(std::make_shared<Cache>()) {
  for (const auto& g : generators_) {
    if (g.modulus() != modulus_) throw ArithmeticError("generator modulus mismatch");
    if (!g.is_invertible()) throw ArithmeticError("non-invertible generator");
  }
}

MatrixGroup MatrixGroup::full(const PrimePowerModulus& modulus) {
  if (modulus.is_level_one()) return trivial(modulus);
  std::vector<ResidueMatrix> gens{{modulus, 1, 1, 0, 1}, {modulus, 1, 0, 1, 1}};
  for (Int u : unit_group_generators(modulus)) gens.emplace_back(modulus, u, 0, 0, 1);
  return {modulus, std::move(gens)};
}

MatrixGroup MatrixGroup::special_linear(const PrimePowerModulus& modulus) {
  if (modulus.is_level_one()) return trivial(modulus);
  return {modulus, {{modulus, 1, 1, 0, 1}, {modulus, 1, 0, 1, 1}}};
}

MatrixGroup MatrixGroup::with_label(std::string label) const {
  MatrixGroup copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

std::vector<std::uint64_t> MatrixGroup::generator_keys() const {
  std::vector<std::uint64_t> keys;
  keys.reserve(generators_.size());
  for (const auto& g : generators_) keys.push_back(g.key());
  return keys;
}

const ElementSet& MatrixGroup::elements(std::size_t cap) const {
  std::lock_guard lock(cache_->mu);
  if (!cache_->elements) {
    const auto keys = generator_keys();
    cache_->elements = std::make_shared<const ElementSet>(close_generators(modulus_, keys, cap));
    cache_->order = static_cast<Int>(cache_->elements->size());
  }
  return *cache_->elements;
}

Int MatrixGroup::order(std::size_t cap) const {
  {
    std::lock_guard lock(cache_->mu);
    if (cache_->order) return *cache_->order;
  }
  Int result = 1;
  if (!modulus_.is_level_one()) {
    result = static_cast<Int>(reduce_group(*this, modulus_.with_exponent(1)).elements(cap).size());
    for (int d = 1; d < modulus_.exponent(); ++d) {
      const auto dim = kernel_layer(*this, d, cap).dim();
      for (std::size_t i = 0; i < dim; ++i) result *= modulus_.ell();
    }
  }
  std::lock_guard lock(cache_->mu);
  cache_->order = result;
  return result;
}

bool MatrixGroup::contains(const ResidueMatrix& m, std::size_t cap) const {
  return elements(cap).contains(m);
}

FpSubspace kernel_layer(const MatrixGroup& g, int d, std::size_t cap) {
  const auto& mod = g.modulus();
  if (d < 1 || d >= mod.exponent()) throw ArithmeticError("kernel layer index out of range");
  const Int ell = mod.ell();
  const PrimePowerModulus top = mod.with_exponent(d + 1);
  const PrimePowerModulus bottom = mod.with_exponent(d);
  check_packable(top);
  const auto mt = static_cast<std::uint64_t>(top.value());
  const auto mb = static_cast<std::uint64_t>(bottom.value());

  std::vector<std::uint64_t> lifts;
  for (const auto& x : g.generators()) lifts.push_back(reduce_matrix(x, top).key());

  // Schreier generators of the kernel over a BFS transversal of g mod ell^d.
  FpSubspace span(ell, 4);
  std::unordered_map<std::uint64_t, std::uint64_t> transversal;
  std::vector<std::uint64_t> queue{packed::kIdentity};
  transversal.emplace(packed::kIdentity, packed::kIdentity);
  for (std::size_t head = 0; head < queue.size() && span.dim() < 4; ++head) {
    const std::uint64_t t = transversal.at(queue[head]);
    for (auto x : lifts) {
      const std::uint64_t lifted = packed::mul(t, x, mt);
      const std::uint64_t reduced = packed::reduce(lifted, mb);
      auto [it, inserted] = transversal.emplace(reduced, lifted);
      if (inserted) {
        queue.push_back(reduced);
        if (queue.size() > cap)
          throw CapExceeded("kernel layer enumeration exceeded cap of " + std::to_string(cap));
        continue;
      }
      const std::uint64_t s = packed::mul(lifted, packed_inverse(it->second, top), mt);
      FpVector v(4);
      for (int i = 0; i < 4; ++i) {
        Int e = static_cast<Int>(packed::entry(s, i)) - ((i == 0 || i == 3) ? 1 : 0);
        v[i] = (e / bottom.value()) % ell;
      }
      span.insert(std::move(v));
    }
  }
  return span;
}

std::size_t enumerate_size(const MatrixGroup& g, std::size_t cap) { return g.elements(cap).size(); }

Int index_in_ambient(const MatrixGroup& g, std::size_t cap) {
  if (g.modulus().is_level_one()) return 1;
  const Int total = gl2_order(g.modulus());
  const Int ord = g.order(cap);
  if (total % ord != 0) throw ArithmeticError("group order does not divide |GL2|");
  return total / ord;
}

PrimePowerModulus level(const MatrixGroup& g, std::size_t cap) {
  const auto& mod = g.modulus();
  const Int ord = g.order(cap);
  const Int total = gl2_order(mod);
  for (int d = 0; d < mod.exponent(); ++d) {
    const auto sub = mod.with_exponent(d);
    const Int reduced = reduce_group(g, sub).order(cap);
    // |preimage of g mod ell^d| = |g mod ell^d| * |GL2(ell^n)| / |GL2(ell^d)|
    if (ord == reduced * (total / gl2_order(sub))) return sub;
  }
  return mod;
}

DetImage det_image(const MatrixGroup& g) {
  const auto& m = g.modulus();
  std::vector<Int> gens;
  for (const auto& x : g.generators()) gens.push_back(x.det());
  std::vector<Int> found{m.reduce(1)};
  std::vector<bool> seen(static_cast<std::size_t>(m.value()), false);
  seen[static_cast<std::size_t>(found[0])] = true;
  for (std::size_t head = 0; head < found.size(); ++head)
    for (Int d : gens) {
      const Int y = m.mul(found[head], d);
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        found.push_back(y);
      }
    }
  std::sort(found.begin(), found.end());
  DetImage out;
  out.surjective = static_cast<Int>(found.size()) == m.unit_count();
  out.units = std::move(found);
  return out;
}

MatrixGroup adjoin_minus_identity(const MatrixGroup& g) {
  const auto& m = g.modulus();
  const auto minus = ResidueMatrix::scalar(m, -1);
  auto gens = g.generators();
  if (std::find(gens.begin(), gens.end(), minus) == gens.end()) gens.push_back(minus);
  return {m, std::move(gens), g.label()};
}

bool contains_minus_identity(const MatrixGroup& g, std::size_t cap) {
  return g.contains(ResidueMatrix::scalar(g.modulus(), -1), cap);
}

MatrixGroup reduce_group(const MatrixGroup& g, const PrimePowerModulus& target) {
  if (!target.divides(g.modulus()))
    throw ArithmeticError("reduction target " + target.to_string() + " does not divide " +
                          g.modulus().to_string());
  if (target == g.modulus()) return g.with_label({});
  std::vector<ResidueMatrix> gens;
  for (const auto& x : g.generators()) {
    auto r = reduce_matrix(x, target);
    if (!r.is_identity() && std::find(gens.begin(), gens.end(), r) == gens.end()) gens.push_back(r);
  }
  return {target, std::move(gens)};
}

MatrixGroup full_preimage(const MatrixGroup& g, const PrimePowerModulus& target) {
  const auto& src = g.modulus();
  if (!src.divides(target))
    throw ArithmeticError("preimage target " + target.to_string() + " is not above " + src.to_string());
  if (src == target) return g;
  if (src.is_level_one()) return MatrixGroup::full(target);
  std::vector<ResidueMatrix> gens;
  for (const auto& x : g.generators()) gens.emplace_back(target, x.entries());
  const Int step = src.value();
  gens.emplace_back(target, 1 + step, 0, 0, 1);
  gens.emplace_back(target, 1, step, 0, 1);
  gens.emplace_back(target, 1, 0, step, 1);
  gens.emplace_back(target, 1, 0, 0, 1 + step);
  return {target, std::move(gens)};
}

ElementSet sl2_part(const MatrixGroup& g, bool plus_minus, std::size_t cap) {
  const auto& els = g.elements(cap);
  const auto m = static_cast<std::uint64_t>(g.modulus().value());
  std::vector<std::uint64_t> out;
  for (auto k : els.keys()) {
    if (g.modulus().is_level_one() || packed::det(k, m) == 1) {
      out.push_back(k);
      if (plus_minus && !g.modulus().is_level_one()) out.push_back(packed::negate(k, m));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return ElementSet(g.modulus(), std::move(out));
}

ResidueMatrix conjugate(const ResidueMatrix& c, const ResidueMatrix& x) { return c * x * mat_inv(c); }

MatrixGroup conjugate_group(const ResidueMatrix& c, const MatrixGroup& g) {
  std::vector<ResidueMatrix> gens;
  for (const auto& x : g.generators()) gens.push_back(conjugate(c, x));
  return {g.modulus(), std::move(gens)};
}

namespace {

// Conjugacy-invariant element statistics: (order, trace, det) counts.
// Element orders are only computed for moderately sized sets.
using Profile = std::map<std::tuple<Int, Int, Int>, std::size_t>;

constexpr std::size_t kOrderProfileLimit = 200'000;

Profile element_profile(const ElementSet& els) {
  const auto& mod = els.modulus();
  const auto m = static_cast<std::uint64_t>(mod.value());
  const bool with_orders = els.size() <= kOrderProfileLimit;
  Profile p;
  for (auto k : els.keys()) {
    Int ord = 0;
    if (with_orders) {
      ord = 1;
      for (std::uint64_t y = k; y != packed::kIdentity; y = packed::mul(y, k, m)) ++ord;
    }
    const Int tr = static_cast<Int>((packed::entry(k, 0) + packed::entry(k, 3)) % m);
    ++p[{ord, tr, static_cast<Int>(packed::det(k, m))}];
  }
  return p;
}

bool dominated(const Profile& small, const Profile& big) {
  for (const auto& [key, count] : small) {
    const auto it = big.find(key);
    if (it == big.end() || it->second < count) return false;
  }
  return true;
}

// Visits GL2 representatives modulo scalars, identity first; stops when
// `visit` returns true.
template <typename Visit>
std::optional<ResidueMatrix> search_modulo_scalars(const PrimePowerModulus& mod, std::size_t cap, Visit visit) {
  const Int m = mod.value();
  const Int candidates = gl2_order(mod) / mod.unit_count();
  if (static_cast<std::size_t>(candidates) > cap)
    throw CapExceeded("conjugacy search space of " + std::to_string(candidates) + " exceeds cap");
  const auto id = ResidueMatrix::identity(mod);
  if (visit(id)) return id;
  for (Int b = 0; b < m; ++b)
    for (Int c = 0; c < m; ++c)
      for (Int d = 0; d < m; ++d) {
        const ResidueMatrix x(mod, 1, b, c, d);
        if (x.is_invertible() && !x.is_identity() && visit(x)) return x;
      }
  for (Int a = 0; a < m; a += mod.ell())
    for (Int c = 0; c < m; ++c)
      for (Int d = 0; d < m; ++d) {
        const ResidueMatrix x(mod, a, 1, c, d);
        if (x.is_invertible() && visit(x)) return x;
      }
  return std::nullopt;
}

ConjugacyResult search_into(const MatrixGroup& h, const ElementSet& target, std::size_t cap) {
  const auto& mod = h.modulus();
  const auto m = static_cast<std::uint64_t>(mod.value());
  const auto gens = h.generator_keys();
  auto fits = [&](const ResidueMatrix& c) {
    const auto ck = c.key();
    const auto ci = mat_inv(c).key();
    for (auto x : gens)
      if (!target.contains_key(packed::mul(packed::mul(ck, x, m), ci, m))) return false;
    return true;
  };
  ConjugacyResult r;
  r.witness = search_modulo_scalars(mod, cap, fits);
  r.found = r.witness.has_value();
  return r;
}

}  // namespace

ConjugacyResult is_conjugate(const MatrixGroup& g, const MatrixGroup& h, std::size_t cap) {
  if (g.modulus() != h.modulus()) throw ArithmeticError("is_conjugate needs equal moduli");
  const auto& ge = g.elements(cap);
  const auto& he = h.elements(cap);
  if (ge.size() != he.size()) return {};
  if (det_image(g).units != det_image(h).units) return {};
  if (element_profile(ge) != element_profile(he)) return {};
  return search_into(g, he, cap);
}

ConjugacyResult conjugate_into(const MatrixGroup& h, const MatrixGroup& big, std::size_t cap) {
  if (h.modulus() != big.modulus()) throw ArithmeticError("conjugate_into needs equal moduli");
  const auto& he = h.elements(cap);
  const auto& be = big.elements(cap);
  if (be.size() % he.size() != 0) return {};
  const auto hd = det_image(h).units;
  const auto bd = det_image(big).units;
  if (!std::includes(bd.begin(), bd.end(), hd.begin(), hd.end())) return {};
  if (!dominated(element_profile(he), element_profile(be))) return {};
  return search_into(h, be, cap);
}

CartanKind parse_cartan_kind(const std::string& text) {
  static const std::map<std::string, CartanKind> kinds{
      {"nonsplit", CartanKind::Nonsplit},
      {"nonsplit-normalizer", CartanKind::NonsplitNormalizer},
      {"split", CartanKind::Split},
      {"split-normalizer", CartanKind::SplitNormalizer},
      {"borel", CartanKind::Borel},
      {"section4-semidirect", CartanKind::Section4Semidirect},
  };
  const auto it = kinds.find(text);
  if (it == kinds.end()) throw std::invalid_argument("unknown Cartan kind '" + text + "'");
  return it->second;
}

std::string to_string(CartanKind kind) {
  switch (kind) {
    case CartanKind::Nonsplit: return "nonsplit";
    case CartanKind::NonsplitNormalizer: return "nonsplit-normalizer";
    case CartanKind::Split: return "split";
    case CartanKind::SplitNormalizer: return "split-normalizer";
    case CartanKind::Borel: return "borel";
    case CartanKind::Section4Semidirect: return "section4-semidirect";
  }
  return "?";
}

namespace {

Int resolve_epsilon(const CartanSpec& spec) {
  const Int ell = spec.modulus.ell();
  if (ell == 2) throw ArithmeticError("nonsplit Cartan constructions need an odd prime");
  const Int eps = spec.epsilon.value_or(smallest_nonresidue(ell));
  if (is_quadratic_residue(eps, ell))
    throw ArithmeticError("epsilon " + std::to_string(eps) + " is a square mod " + std::to_string(ell));
  return eps;
}

// Generators of {[a eps*b; b a]} with (a,b) != (0,0) mod ell: a lift of a
// generator of F_{ell^2}^x plus the principal units 1+ell and 1+ell*sqrt(eps).
std::vector<ResidueMatrix> nonsplit_generators(const PrimePowerModulus& mod, Int eps) {
  const Int ell = mod.ell();
  const PrimePowerModulus residue(ell, 1);
  std::optional<ResidueMatrix> primitive;
  for (Int a = 0; a < ell && !primitive; ++a)
    for (Int b = 1; b < ell && !primitive; ++b) {
      const ResidueMatrix x(residue, a, eps * b, b, a);
      if (x.is_invertible() && mat_order(x) == ell * ell - 1) primitive = x;
    }
  std::vector<ResidueMatrix> gens{ResidueMatrix(mod, primitive->entries())};
  if (mod.exponent() >= 2) {
    gens.emplace_back(mod, 1 + ell, 0, 0, 1 + ell);
    gens.emplace_back(mod, 1, eps * ell, ell, 1);
  }
  return gens;
}

std::vector<ResidueMatrix> diagonal_generators(const PrimePowerModulus& mod) {
  std::vector<ResidueMatrix> gens;
  for (Int u : unit_group_generators(mod)) {
    gens.emplace_back(mod, u, 0, 0, 1);
    gens.emplace_back(mod, 1, 0, 0, u);
  }
  return gens;
}

}  // namespace

MatrixGroup build_cartan(const CartanSpec& spec) {
  const auto& mod = spec.modulus;
  if (mod.exponent() < 1) throw ArithmeticError("Cartan constructions need exponent >= 1");
  const Int m = mod.value();
  std::vector<ResidueMatrix> gens;
  switch (spec.kind) {
    case CartanKind::Nonsplit:
      gens = nonsplit_generators(mod, resolve_epsilon(spec));
      break;
    case CartanKind::NonsplitNormalizer:
      gens = nonsplit_generators(mod, resolve_epsilon(spec));
      gens.emplace_back(mod, 1, 0, 0, m - 1);
      break;
    case CartanKind::Split:
      gens = diagonal_generators(mod);
      break;
    case CartanKind::SplitNormalizer:
      gens = diagonal_generators(mod);
      gens.emplace_back(mod, 0, 1, 1, 0);
      break;
    case CartanKind::Borel:
      gens = diagonal_generators(mod);
      gens.emplace_back(mod, 1, 1, 0, 1);
      break;
    case CartanKind::Section4Semidirect: {
      if (mod.exponent() != 2) throw ArithmeticError("section4-semidirect is defined mod ell^2 only");
      const Int ell = mod.ell();
      const Int eps = resolve_epsilon(spec);
      const PrimePowerModulus residue(ell, 1);
      // Lifting x of order dividing ell^2-1 to X^(ell^2) keeps the order, so
      // the lifted normalizer is a complement to the kernel.
      auto base = nonsplit_generators(residue, eps);
      base.emplace_back(residue, 1, 0, 0, ell - 1);
      for (const auto& x : base) gens.push_back(mat_pow(ResidueMatrix(mod, x.entries()), ell * ell));
      // I + ell*[a eps*b; -b c]
      gens.emplace_back(mod, 1 + ell, 0, 0, 1);
      gens.emplace_back(mod, 1, eps * ell, -ell, 1);
      gens.emplace_back(mod, 1, 0, 0, 1 + ell);
      MatrixGroup g(mod, std::move(gens), "section4-semidirect");
      const Int expected = 2 * (ell * ell - 1) * ell * ell * ell;
      if (g.order() != expected)
        throw ArithmeticError("section4-semidirect construction has order " + std::to_string(g.order()) +
                              ", expected " + std::to_string(expected));
      return g;
    }
  }
  return {mod, std::move(gens), to_string(spec.kind)};
}

}  // namespace isocurve
