#pragma once

// Cohomology rings given by finite presentations (basis, grading and
// structure constants), with Chern characters, Todd classes, Euler
// characteristics and relative pushforwards along a fibration.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fmcalc/field.hpp"

namespace fmcalc::grr {

// Coordinates in the ring basis; mixed degrees allowed.
using Class = std::vector<Rational>;

struct Ring {
  std::string name;
  int dimension = 3;  // complex dimension; the point class has degree 2*dimension
  std::vector<std::string> basis;
  std::vector<int> degree;                       // real degrees, basis[0] is the unit
  std::vector<std::vector<Class>> product;       // product[i][j], filled symmetric on load
  Class c1, c2, c3;
  bool calabi_yau = false;
  struct DeclaredIntegral {
    std::size_t a, b;
    Rational value;
  };
  std::vector<DeclaredIntegral> declared_integrals;

  std::size_t size() const { return basis.size(); }
  std::size_t index_of(const std::string& name) const;  // Parse error if absent
  std::size_t top_index() const;                        // the point class

  Class zero() const { return Class(size(), Rational(0)); }
  Class unit() const;
  Class element(const std::string& name) const;
  Class mul(const Class& a, const Class& b) const;
  Class part(const Class& a, int deg) const;  // homogeneous component of real degree deg
  Rational integrate(const Class& a) const;   // coefficient of the point class
  bool homogeneous_of(const Class& a, int deg) const;
  Class exp(const Class& d) const;            // truncated exponential
};

Class add(const Class& a, const Class& b);
Class sub(const Class& a, const Class& b);
Class scale(const Rational& s, const Class& a);

struct RingReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

RingReport validate_ring(const Ring& r);
// Throws HypothesisViolation listing the report's errors.
void require_valid(const Ring& r);

Rational cubic_form(const Ring& r, const Class& d1, const Class& d2, const Class& d3);
Rational c2_pair(const Ring& r, const Class& d);

// Chern character from Chern classes of the given degrees 2, 4, 6.
Class chern_to_ch(const Ring& r, const Rational& rank, const Class& c1, const Class& c2, const Class& c3);
Class todd(const Ring& r);
Rational chi_grr(const Ring& r, const Class& ch);
// Duality on characters: ch_k -> (-1)^k ch_k.
Class dual_ch(const Ring& r, const Class& ch);

struct Template {
  std::string space = "X";
  long r = 0, d = 0;
  Class ch;  // on the total ring
};

struct Fibration {
  Ring total, base;
  std::vector<Class> pushforward;  // per total basis element, a base class; empty if absent
  std::vector<Class> pullback;     // per base basis element, a total class; empty if absent
  std::optional<Class> relative_todd;
  std::vector<Template> templates;
};

Class pushforward_class(const Fibration& f, const Class& a);
Class pullback_class(const Fibration& f, const Class& a);
// td_X * pullback(td_S^{-1}) unless a relative Todd class is declared.
Class relative_todd(const Fibration& f);
// ch of the derived pushforward: pi_*(ch * td_rel).
Class pushforward_ch(const Fibration& f, const Class& ch);

// Pushforward of the template for (r, d) twisted by the pullback of a base
// divisor.
Class p_class_ch(const Fibration& f, const std::string& space, long r, long d, const Class& twist);
const Template& find_template(const Fibration& f, const std::string& space, long r, long d);

void validate(const Fibration& f);

}  // namespace fmcalc::grr
