#pragma once

// Gieseker stability of bundles on polarized I_n cycles by a bounded search
// for destabilizing subsheaves.
//
// Candidates come in three kinds:
//   SubLine     a rank-one sheaf T on a connected support (full cycle or chain)
//               with a map T -> E nonzero on every support component;
//   QuotientLine  a rank-one sheaf T with a map E -> T nonzero on every support
//               component; its kernel is the destabilizing subsheaf;
//   Restriction sections of E supported on a proper chain S, i.e. E|_S
//               twisted down at both ends of S.
// Existence of maps is monotone under twisting by smooth points, so each
// support is only probed at the extremal total degree allowed by the slope
// inequality. Full-cycle test sheaves carry a free gluing parameter, decided
// exactly through a linear pencil.

#include <optional>
#include <string>
#include <vector>

#include "fmcalc/cycle_sheaves.hpp"
#include "fmcalc/pencil.hpp"

namespace fmcalc::cyc {

enum class CandidateKind { SubLine, QuotientLine, Restriction };
const char* to_string(CandidateKind k);

enum class Verdict { Stable, StrictlySemistable, Unstable };
const char* to_string(Verdict v);

template <class F>
struct Destabilizer {
  CandidateKind kind = CandidateKind::SubLine;
  RankOneTestSheaf sheaf;           // the test sheaf, or the support of a restriction
  long chi = 0;                     // Euler characteristic of the destabilizing subsheaf
  long weight = 0;                  // its polarized rank sum(a_i rk_{P_i})
  Rational slope;                   // chi / weight
  bool strict = false;              // slope > mu(E)
  std::optional<PencilWitness<F>> witness;  // absent for restrictions
};

template <class F>
struct StabilityReport {
  Verdict verdict = Verdict::Stable;
  Rational mu;
  std::vector<Destabilizer<F>> candidates;
  bool truncated = false;  // some extremal level fell outside [-B, B]
  bool complete = false;   // search provably exhausts saturated subsheaves
};

// Requires a positive weight on every component (an ample polarization).
void validate_polarization_for(const CycleBundle& e, const PolarizedCycle& c);

// Every candidate with slope >= mu(E).
template <class F>
StabilityReport<F> enumerate_destabilizers(const CycleBundle& e, const PolarizedCycle& c, long bound);

// Stops at the first certificate; candidates holds at most one entry.
template <class F>
StabilityReport<F> is_stable(const CycleBundle& e, const PolarizedCycle& c, long bound);

// Rebuilds the node system from the descriptor alone, checks the witness
// and redoes the slope arithmetic.
template <class F>
bool verify_destabilizer(const CycleBundle& e, const PolarizedCycle& c, const Destabilizer<F>& d);

}  // namespace fmcalc::cyc
