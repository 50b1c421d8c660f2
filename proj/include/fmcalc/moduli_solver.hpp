#pragma once

// Recovers the cubic form and c2 pairings of a relative moduli space M over a
// surface from cross-space identities P_X(r', d') = R pi_*(V_M(r, d) (x) V_M(b, e)).
// The M-side character is evaluated by relative GRR on a parametrized ring
// with divisor basis {Theta, H}, H pulled back from the base.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fmcalc/fm_lattice.hpp"
#include "fmcalc/grr.hpp"

namespace fmcalc::grr {

// Theta^3, Theta^2.H, Theta.H^2, H^3, c2.Theta, c2.H
inline const std::vector<std::string> kModuliUnknowns = {"Theta^3", "Theta^2.H", "Theta.H^2",
                                                         "H^3",     "c2.Theta",  "c2.H"};

// Fibration M -> base for the given unknown values; the base must carry a
// single divisor class h with h.h != 0.
Fibration moduli_fibration(const Ring& base, const std::vector<Rational>& unknowns);

// ch = r * exp((theta * Theta + h * H) / r) on M.
struct MTemplate {
  long r = 1, d = 0;
  Rational theta, h;
};

Class m_template_ch(const Ring& m, const MTemplate& t);

struct SolverSample {
  fm::FiberClass m_class;  // V_M(r, d); the partner V_M(b, e) comes from the kernel
  fm::FiberClass x_class;  // expected transform
  Class x_ch;              // character of the X-side pushforward on the base
};

// Quotient: X-side characters are known only up to a pullback twist, so each
// sample contributes the twist invariants (rank, discriminant).
// Matched: X-side and M-side representatives agree; every coordinate counts.
enum class TwistMode { Quotient, Matched };
const char* to_string(TwistMode m);

struct SolverInput {
  Ring base;
  fm::KernelData kernel;
  std::vector<MTemplate> templates;
  std::vector<SolverSample> samples;
  std::map<std::string, Rational> structural{{"H^3", Rational(0)}};
  TwistMode twist = TwistMode::Quotient;
};

struct SolverReport {
  TwistMode twist = TwistMode::Quotient;
  std::vector<std::string> unknowns;
  std::vector<std::string> lifted;  // unknowns followed by lifted monomials
  std::size_t equations = 0;
  std::size_t lifted_rank = 0;
  std::size_t substitutions = 0;                   // products fixed after the linear solve
  std::vector<bool> determined;                    // per lifted unknown
  std::vector<Rational> values;                    // per lifted unknown; meaningful when determined
  std::vector<std::vector<Rational>> null_space;   // over the original unknowns
  std::vector<std::string> unresolved;
  std::size_t rank = 0;                            // over the original unknowns
  bool full_rank = false;
  bool consistent = true;                          // all equations hold at the solution
  std::vector<std::vector<Rational>> residual;     // reduced rows over `lifted`, then rhs; when not full rank
  std::vector<std::string> notes;
};

// Throws InconsistentSystem when no solution exists.
SolverReport solve_moduli_invariants(const SolverInput& in);

struct SyntheticModuli {
  std::vector<Rational> planted;
  SolverInput input;
};

// Random cubic form and c2 pairings with entries in [-range, range],
// Theta.H^2 != 0 and H^3 = 0; samples V_M(r, 5) (x) V_M(2, -1) for every r in
// `ranks`. In quotient mode each X-side character carries a random twist.
SyntheticModuli synthetic_moduli(const Ring& base, std::uint64_t seed, TwistMode mode,
                                 const std::vector<long>& ranks, long range = 20);

// r <= bound with gcd(r, 5) == 1.
std::vector<long> ranks_coprime_to_5(long bound);

}  // namespace fmcalc::grr
