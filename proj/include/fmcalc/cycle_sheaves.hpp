#pragma once

// Locally free sheaves on Kodaira I_n fibers: a cycle of n rational curves
// C_0..C_{n-1}, where infinity on C_j is glued to the origin on C_{j+1 mod n}.
//
// A bundle is presented by its splitting type on each component plus one
// invertible gluing matrix per node. On a summand O(k) a section is a
// polynomial of degree <= k; at the origin it is read by its constant
// coefficient and at infinity by its z^k coefficient. The node-j gluing maps
// the fiber at infinity of C_j to the fiber at the origin of C_{j+1}.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fmcalc/field.hpp"
#include "fmcalc/linalg.hpp"

namespace fmcalc::cyc {

struct MarkedPoint {
  std::size_t component = 0;
  Rational coordinate = 1;  // affine coordinate on the component; never 0
  long weight = 1;          // positive
};

// Polarization L = O(sum a_i P_i) on an I_n cycle.
struct PolarizedCycle {
  std::size_t n = 1;
  std::vector<MarkedPoint> points;

  // Sum of weights of marked points on the given components.
  long weight_on(const std::vector<std::size_t>& components) const;
  long total_weight() const;
};

void validate(const PolarizedCycle& c);

struct CycleBundle {
  std::size_t n = 1;
  std::size_t rank = 1;
  std::vector<std::vector<long>> split;      // split[j][i], j < n, i < rank
  std::vector<Matrix<Rational>> gluing;      // gluing[j]: node C_j(inf) -> C_{j+1}(0)

  long total_degree() const;
  std::vector<long> multidegree() const;
  long max_split(std::size_t component) const;
  long min_split(std::size_t component) const;

  friend bool operator==(const CycleBundle&, const CycleBundle&) = default;
};

// Throws HypothesisViolation on shape errors or singular gluings.
void validate(const CycleBundle& e);

CycleBundle trivial_bundle(std::size_t n, std::size_t rank = 1);
// Line bundle with the given multidegree and gluing lambda at the last node.
CycleBundle line_bundle(const std::vector<long>& multidegree, const Rational& lambda = 1);
CycleBundle direct_sum(const CycleBundle& a, const CycleBundle& b);

// Rank-one torsion-free sheaf on a connected subcurve: either the whole cycle
// (a line bundle; its gluing parameter sits on the last node) or a chain
// C_start, ..., C_{start+length-1} whose end nodes are cut open.
struct RankOneTestSheaf {
  std::size_t n = 1;
  bool full_cycle = true;
  std::size_t start = 0;
  std::size_t length = 1;                // == n for the full cycle
  std::vector<long> multidegree;          // one entry per support component, in order
  std::optional<Rational> lambda;         // full cycle only; nullopt = generic parameter

  std::vector<std::size_t> components() const;
  long degree() const;
};

void validate(const RankOneTestSheaf& t);

long euler_char(const CycleBundle& e);
long euler_char(const RankOneTestSheaf& t);

Rational slope_mu(const CycleBundle& e, const PolarizedCycle& c);
Rational slope_mu(const RankOneTestSheaf& t, const PolarizedCycle& c);

// One morphism: per component, an r_F x r_E matrix of coefficient lists
// (empty list when the entry's degree bound is negative).
using PolyMatrixEntry = std::vector<Rational>;
using ComponentMorphism = std::vector<std::vector<PolyMatrixEntry>>;

struct HomReport {
  std::size_t dimension = 0;
  std::vector<std::vector<ComponentMorphism>> basis;  // filled on request (rational field only)
};

template <class F>
HomReport hom_dim(const CycleBundle& e, const CycleBundle& f, bool with_basis = false);

template <class F>
std::size_t h0(const CycleBundle& e);
template <class F>
std::size_t h1(const CycleBundle& e);
template <class F>
bool is_simple(const CycleBundle& e);

CycleBundle tensor(const CycleBundle& e, const CycleBundle& f);
CycleBundle dual(const CycleBundle& e);

enum class Definiteness { Ample, AntiAmple, Neither };
const char* to_string(Definiteness d);

struct DetReport {
  RankOneTestSheaf det;
  Definiteness definiteness = Definiteness::Neither;
};

DetReport det_bundle(const CycleBundle& e);

// One smooth point (coordinate 1) per component, weight |component degree|.
// Throws NotDefinite unless the determinant is ample or anti-ample.
PolarizedCycle induced_polarization(const DetReport& det);

// Degrees spread as evenly as possible over components then summands;
// gluing is the cyclic shift scaled by lambda on the last node.
CycleBundle make_cyclic_bundle(std::size_t n, long rank, long degree, const Rational& lambda);

}  // namespace fmcalc::cyc
