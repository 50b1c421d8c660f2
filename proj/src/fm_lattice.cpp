#include "fmcalc/fm_lattice.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "fmcalc/errors.hpp"

namespace fmcalc::fm {

namespace {

Int checked_mul(Int x, Int y) {
  Int out;
  if (__builtin_mul_overflow(x, y, &out)) fail(ErrorKind::Overflow, "64-bit overflow in lattice arithmetic");
  return out;
}

Int checked_add(Int x, Int y) {
  Int out;
  if (__builtin_add_overflow(x, y, &out)) fail(ErrorKind::Overflow, "64-bit overflow in lattice arithmetic");
  return out;
}

Int gcd_abs(Int x, Int y) { return std::gcd(x < 0 ? -x : x, y < 0 ? -y : y); }

std::string pair_str(Int r, Int d) {
  return "(" + std::to_string(r) + "," + std::to_string(d) + ")";
}

Int mod2(Int s) { return ((s % 2) + 2) % 2; }

}  // namespace

void validate(const FiberClass& v) {
  if (v.r == 0) fail(ErrorKind::HypothesisViolation, "rank must be nonzero, got " + pair_str(v.r, v.d));
  if (gcd_abs(v.r, v.d) != 1)
    fail(ErrorKind::HypothesisViolation, "rank and degree must be coprime, got " + pair_str(v.r, v.d));
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
  Mat2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out[i][j] = checked_add(checked_mul(x[i][0], y[0][j]), checked_mul(x[i][1], y[1][j]));
  return out;
}

Int det(const Mat2& m) {
  return checked_add(checked_mul(m[0][0], m[1][1]), -checked_mul(m[0][1], m[1][0]));
}

KernelData kernel_from_moduli(Int a, Int b, Int c, Int n, std::string source, std::string target) {
  if (a <= 0) fail(ErrorKind::HypothesisViolation, "fiber rank a must be positive, got " + std::to_string(a));
  if (n <= 0)
    fail(ErrorKind::HypothesisViolation, "multisection degree n must be positive, got " + std::to_string(n));
  if (gcd_abs(checked_mul(n, a), b) != 1)
    fail(ErrorKind::HypothesisViolation,
         "gcd(n a, b) must be 1, got n=" + std::to_string(n) + " a=" + std::to_string(a) + " b=" + std::to_string(b));
  Int numer = checked_add(checked_mul(b, c), -1);
  if (numer % a != 0)
    fail(ErrorKind::NonIntegralE, "a=" + std::to_string(a) + " does not divide bc-1=" + std::to_string(numer));
  KernelData k;
  k.a = a;
  k.b = b;
  k.c = c;
  k.e = numer / a;
  k.n = n;
  k.source = std::move(source);
  k.target = std::move(target);
  return k;
}

KernelData retwist(const KernelData& k, Int twist) {
  KernelData out = k;
  out.c = checked_add(k.c, checked_mul(twist, k.a));
  out.e = checked_add(k.e, checked_mul(twist, k.b));
  return out;
}

FiberClass apply(const Mat2& m, const FiberClass& v, const std::string& target_space) {
  FiberClass out;
  out.r = checked_add(checked_mul(m[0][0], v.r), checked_mul(m[0][1], v.d));
  out.d = checked_add(checked_mul(m[1][0], v.r), checked_mul(m[1][1], v.d));
  out.space = target_space;
  out.shift = v.shift;
  if (out.r == 0)
    fail(ErrorKind::TorsionTransform, "class " + pair_str(v.r, v.d) + " transforms to rank 0 (torsion)");
  return out;
}

FiberClass transform_class(const KernelData& k, const FiberClass& v) {
  if (v.space != k.source)
    fail(ErrorKind::TagMismatch, "class lives on '" + v.space + "' but kernel source is '" + k.source + "'");
  validate(v);
  return apply(k.matrix(), v, k.target);
}

KernelData invert_kernel(const KernelData& k) {
  KernelData inv;
  inv.c = k.b;
  inv.a = -k.a;
  inv.e = -k.e;
  inv.b = k.c;
  inv.n = k.n;
  inv.source = k.target;
  inv.target = k.source;
  return inv;
}

Mat2 compose_kernels(const KernelData& outer, const KernelData& inner) {
  if (outer.source != inner.target)
    fail(ErrorKind::TagMismatch,
         "cannot compose: inner kernel lands on '" + inner.target + "', outer starts at '" + outer.source + "'");
  return outer.matrix() * inner.matrix();
}

FiberClass dualize_class(const FiberClass& v) {
  FiberClass out = v;
  out.d = -v.d;
  return out;
}

FiberClass shift_class(const FiberClass& v) {
  FiberClass out = v;
  out.r = -v.r;
  out.d = -v.d;
  out.shift = checked_add(v.shift, 1);
  return out;
}

FiberClass thm2_step(const FiberClass& v) {
  FiberClass out = v;
  out.r = checked_add(v.r, v.d);
  return out;
}

// --- P-classes --------------------------------------------------------------

std::string to_string(const PClass& p) {
  std::ostringstream os;
  os << "P_" << p.base.space << pair_str(p.base.r, p.base.d);
  if (p.dual) os << "^v";
  if (p.shift != 0) os << "[" << p.shift << "]";
  return os.str();
}

const char* to_string(Rule rule) {
  switch (rule) {
    case Rule::DualFlipRank: return "dual-flip-rank";
    case Rule::DualFlipDegree: return "dual-flip-degree";
    case Rule::NegateShift: return "negate-shift";
    case Rule::Periodicity: return "periodicity";
  }
  return "?";
}

const char* to_string(Equality e) {
  switch (e) {
    case Equality::EqualExactly: return "equal-exactly";
    case Equality::EqualUpToShift: return "equal-up-to-shift";
    case Equality::NotProvablyEqual: return "not-provably-equal";
  }
  return "?";
}

std::vector<Rule> applicable_rules(const PClass& p, bool generic) {
  if (p.dual) return {Rule::DualFlipRank, Rule::DualFlipDegree};
  if (generic && p.base.d != 0) {
    if (p.base.d < 0) return {Rule::NegateShift};
    if (p.base.r <= 0 || p.base.r > p.base.d) return {Rule::Periodicity};
    return {};
  }
  if (p.base.r < 0) return {Rule::NegateShift};
  return {};
}

PClass apply_rule(Rule rule, const PClass& p) {
  PClass q = p;
  switch (rule) {
    case Rule::DualFlipRank:
      q.dual = false;
      q.base.r = -p.base.r;
      break;
    case Rule::DualFlipDegree:
      q.dual = false;
      q.base.d = -p.base.d;
      q.shift = checked_add(p.shift, -1);
      break;
    case Rule::NegateShift:
      q.base.r = -p.base.r;
      q.base.d = -p.base.d;
      q.shift = checked_add(p.shift, 1);
      break;
    case Rule::Periodicity: {
      Int window = p.base.d < 0 ? -p.base.d : p.base.d;
      q.base.r = p.base.r > window ? p.base.r - window : checked_add(p.base.r, window);
      break;
    }
  }
  return q;
}

Canonical canonicalize_P(const PClass& p, bool generic, const std::function<std::size_t(std::size_t)>& choose) {
  validate(p.base);
  if (generic && p.base.d == 0)
    fail(ErrorKind::UndefinedReduction, "periodicity modulo d is undefined for d = 0 in " + to_string(p));
  Canonical out;
  PClass cur = p;
  cur.base.shift = 0;
  for (;;) {
    auto rules = applicable_rules(cur, generic);
    if (rules.empty()) break;
    std::size_t pick = choose ? choose(rules.size()) % rules.size() : 0;
    PClass next = apply_rule(rules[pick], cur);
    out.log.push_back({rules[pick], cur, next});
    cur = next;
  }
  cur.shift = mod2(cur.shift);
  out.value = cur;
  return out;
}

// --- equality ---------------------------------------------------------------

namespace {

// Union-find over canonical (space, r, d) with shift parity relative to root.
class ParityUnionFind {
 public:
  using Key = std::tuple<std::string, Int, Int>;

  std::pair<Key, Int> find(const Key& k) {
    auto it = parent_.find(k);
    if (it == parent_.end()) return {k, 0};
    auto [root, par] = find(it->second.first);
    Int total = mod2(par + it->second.second);
    it->second = {root, total};
    return {root, total};
  }

  // Record: node x == node y shifted by `offset` (mod 2).
  void unite(const Key& x, const Key& y, Int offset) {
    auto [rx, px] = find(x);
    auto [ry, py] = find(y);
    if (rx == ry) return;
    parent_[rx] = {ry, mod2(offset + py - px)};
  }

 private:
  std::map<Key, std::pair<Key, Int>> parent_;
};

ParityUnionFind::Key key_of(const PClass& p) { return {p.base.space, p.base.r, p.base.d}; }

}  // namespace

Equality PEqualityDecider::equal(const PClass& p, const PClass& q, bool generic) const {
  PClass cp = canonicalize_P(p, generic).value;
  PClass cq = canonicalize_P(q, generic).value;
  ParityUnionFind uf;
  for (const auto& b : bridges_) {
    PClass l, r;
    try {
      l = canonicalize_P(b.lhs, generic).value;
      r = canonicalize_P(b.rhs, generic).value;
    } catch (const Error&) {
      continue;  // bridge not expressible under this flag
    }
    // l.base[l.shift] == r.base[r.shift]  =>  l.base == r.base[r.shift - l.shift]
    uf.unite(key_of(l), key_of(r), r.shift - l.shift);
  }
  auto [root_p, par_p] = uf.find(key_of(cp));
  auto [root_q, par_q] = uf.find(key_of(cq));
  if (root_p != root_q) return Equality::NotProvablyEqual;
  // X[s] where X == root[par]  =>  root[par + s]
  return mod2(par_p + cp.shift) == mod2(par_q + cq.shift) ? Equality::EqualExactly : Equality::EqualUpToShift;
}

Equality equal_P(const PClass& p, const PClass& q, bool generic) {
  return PEqualityDecider{}.equal(p, q, generic);
}

// --- cross-space identities -------------------------------------------------

Thm3Identity thm3_identity(const KernelData& k, Int d) {
  Thm3Identity id;
  id.m_class = FiberClass{1, d, k.source, 0};
  id.m_partner = FiberClass{k.b, k.e, k.source, 0};
  Int xr = checked_add(k.c, checked_mul(k.a, d));
  Int xd = checked_add(k.e, checked_mul(k.b, d));
  if (xr == 0) fail(ErrorKind::TorsionTransform, "identity has rank 0 on '" + k.target + "'");
  if (k.b == 0)
    fail(ErrorKind::TorsionTransform, "b = 0 gives a rank-0 class on '" + k.source + "'; no identity");
  id.x_class = FiberClass{xr, xd, k.target, 0};
  PClass lhs{id.x_class, false, 0};
  PClass rhs{FiberClass{k.b, xd, k.source, 0}, false, 0};
  validate(lhs.base);
  validate(rhs.base);
  id.bridge = Bridge{lhs, rhs};
  id.annotation = to_string(lhs) + " = " + to_string(rhs);
  return id;
}

Thm3Identity thm3_general(const KernelData& k, const FiberClass& v) {
  if (v.r == 1) {
    if (v.space != k.source)
      fail(ErrorKind::TagMismatch, "class lives on '" + v.space + "' but kernel source is '" + k.source + "'");
    return thm3_identity(k, v.d);
  }
  Thm3Identity id;
  id.m_class = v;
  id.m_partner = FiberClass{k.b, k.e, k.source, 0};
  id.x_class = transform_class(k, v);
  id.annotation = "P_" + k.target + pair_str(id.x_class.r, id.x_class.d) + " = R pi_*(V_" + k.source +
                  pair_str(v.r, v.d) + " (x) V_" + k.source + pair_str(k.b, k.e) +
                  "); pushforward of a tensor product, not registered as a P-class identity";
  return id;
}

}  // namespace fmcalc::fm
