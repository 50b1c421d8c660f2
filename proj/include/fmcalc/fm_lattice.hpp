#pragma once

// Integer lattice calculus of relative Fourier-Mukai transforms acting on
// fiberwise (rank, degree) classes, and a canonical-form equality decider
// for pushforward classes P(r, d).

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fmcalc::fm {

using Int = std::int64_t;

// Numerical class of a fiberwise stable bundle V(r, d), possibly shifted.
// Negative r encodes an odd shift; `shift` counts applied shifts so that
// even shifts stay visible.
struct FiberClass {
  Int r = 1;
  Int d = 0;
  std::string space = "X";
  Int shift = 0;

  friend bool operator==(const FiberClass&, const FiberClass&) = default;
};

// Throws HypothesisViolation unless r != 0 and gcd(|r|, d) == 1.
void validate(const FiberClass& v);

using Mat2 = std::array<std::array<Int, 2>, 2>;

Mat2 operator*(const Mat2& a, const Mat2& b);
Int det(const Mat2& m);
inline constexpr Mat2 kIdentity2{{{1, 0}, {0, 1}}};

// Numerical data of a relative moduli kernel: matrix [[c, a], [e, b]] with
// a*e = b*c - 1. Maps classes on `source` to classes on `target`.
struct KernelData {
  Int a = 1, b = 0, c = 0, e = -1;
  Int n = 1;
  std::string source = "M";
  std::string target = "X";

  Mat2 matrix() const { return {{{c, a}, {e, b}}}; }
  friend bool operator==(const KernelData&, const KernelData&) = default;
};

// e = (bc - 1)/a. Requires a > 0, n > 0, gcd(n a, b) = 1.
KernelData kernel_from_moduli(Int a, Int b, Int c, Int n, std::string source = "M",
                              std::string target = "X");

// Changing the universal sheaf by a pullback twist moves (c, e) to
// (c + k a, e + k b); the matrix stays unimodular.
KernelData retwist(const KernelData& k, Int twist);

FiberClass apply(const Mat2& m, const FiberClass& v, const std::string& target_space);
FiberClass transform_class(const KernelData& k, const FiberClass& v);
KernelData invert_kernel(const KernelData& k);
Mat2 compose_kernels(const KernelData& outer, const KernelData& inner);

FiberClass dualize_class(const FiberClass& v);
FiberClass shift_class(const FiberClass& v);

// Fiberwise step realizing the periodicity rule: (r, d) -> (r + d, d).
FiberClass thm2_step(const FiberClass& v);

// ---------------------------------------------------------------------------
// P-classes: P(r, d), optionally dualized, then shifted.

struct PClass {
  FiberClass base;  // base.shift is ignored; use `shift`
  bool dual = false;
  Int shift = 0;

  friend bool operator==(const PClass&, const PClass&) = default;
};

std::string to_string(const PClass& p);

enum class Rule {
  DualFlipRank,    // P(r,d)^v[s]  -> P(-r, d)[s]
  DualFlipDegree,  // P(r,d)^v[s]  -> P(r, -d)[s-1]
  NegateShift,     // P(r,d)[s], r < 0 (d < 0 when generic) -> P(-r, -d)[s+1]
  Periodicity,     // P(r,d)[s], r outside (0,d] -> P(r -+ d, d)[s]   (generic only, d > 0)
};

const char* to_string(Rule rule);

struct RewriteStep {
  Rule rule;
  PClass before, after;
};

struct Canonical {
  PClass value;  // dual == false, r > 0, shift in {0, 1}
  std::vector<RewriteStep> log;
};

// Rules applicable to p, in enum order.
std::vector<Rule> applicable_rules(const PClass& p, bool generic);
PClass apply_rule(Rule rule, const PClass& p);

// Rewrites to the canonical representative. `choose` picks among applicable
// rules (default: the first); canonical forms do not depend on the choice.
Canonical canonicalize_P(const PClass& p, bool generic,
                         const std::function<std::size_t(std::size_t)>& choose = {});

enum class Equality { EqualExactly, EqualUpToShift, NotProvablyEqual };
const char* to_string(Equality e);

// A cross-space identity lhs == rhs (exactly, up to even shifts).
struct Bridge {
  PClass lhs, rhs;
};

struct Thm3Identity {
  std::optional<Bridge> bridge;  // present when the rank-one form applies
  FiberClass x_class;            // transform of (r, d)
  FiberClass m_class;            // V_M(r, d)
  FiberClass m_partner;          // V_M(b, e)
  std::string annotation;
};

// Rank-one form: P_target(c + a d, e + b d) = P_source(b, e + b d).
Thm3Identity thm3_identity(const KernelData& k, Int d);
// General form: only an annotation unless r == 1.
Thm3Identity thm3_general(const KernelData& k, const FiberClass& v);

class PEqualityDecider {
 public:
  void register_bridge(const Bridge& b) { bridges_.push_back(b); }
  const std::vector<Bridge>& bridges() const { return bridges_; }

  Equality equal(const PClass& p, const PClass& q, bool generic) const;

 private:
  std::vector<Bridge> bridges_;
};

Equality equal_P(const PClass& p, const PClass& q, bool generic);

}  // namespace fmcalc::fm
