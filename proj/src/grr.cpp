#include "fmcalc/grr.hpp"

#include <sstream>

#include "fmcalc/errors.hpp"
#include "fmcalc/linalg.hpp"

namespace fmcalc::grr {

std::size_t Ring::index_of(const std::string& name_) const {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i] == name_) return i;
  fail(ErrorKind::Parse, "ring " + name + " has no basis element '" + name_ + "'");
}

std::size_t Ring::top_index() const {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (degree[i] == 2 * dimension) return i;
  fail(ErrorKind::HypothesisViolation, "ring " + name + " has no point class");
}

Class Ring::unit() const {
  Class u = zero();
  u[0] = 1;
  return u;
}

Class Ring::element(const std::string& n) const {
  Class e = zero();
  e[index_of(n)] = 1;
  return e;
}

Class Ring::mul(const Class& a, const Class& b) const {
  Class out = zero();
  for (std::size_t i = 0; i < size(); ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < size(); ++j) {
      if (is_zero(b[j])) continue;
      Rational s = a[i] * b[j];
      const Class& p = product[i][j];
      for (std::size_t k = 0; k < size(); ++k)
        if (!is_zero(p[k])) out[k] += s * p[k];
    }
  }
  return out;
}

Class Ring::part(const Class& a, int deg) const {
  Class out = zero();
  for (std::size_t i = 0; i < size(); ++i)
    if (degree[i] == deg) out[i] = a[i];
  return out;
}

Rational Ring::integrate(const Class& a) const { return a[top_index()]; }

bool Ring::homogeneous_of(const Class& a, int deg) const {
  for (std::size_t i = 0; i < size(); ++i)
    if (degree[i] != deg && !is_zero(a[i])) return false;
  return true;
}

Class Ring::exp(const Class& d) const {
  Class out = unit(), power = unit();
  Rational fact = 1;
  for (int k = 1; k <= dimension; ++k) {
    power = mul(power, d);
    fact *= k;
    out = add(out, scale(Rational(1) / fact, power));
  }
  return out;
}

Class add(const Class& a, const Class& b) {
  Class out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Class sub(const Class& a, const Class& b) {
  Class out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Class scale(const Rational& s, const Class& a) {
  Class out(a);
  for (auto& x : out) x *= s;
  return out;
}

namespace {

std::string show(const Ring& r, const Class& c) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (is_zero(c[i])) continue;
    out << (first ? "" : " + ") << to_string(c[i]) << "*" << r.basis[i];
    first = false;
  }
  return first ? "0" : out.str();
}

}  // namespace

RingReport validate_ring(const Ring& r) {
  RingReport rep;
  auto err = [&](const std::string& s) { rep.errors.push_back(s); };
  std::size_t n = r.size();
  if (n == 0) {
    err("empty basis");
    return rep;
  }
  if (r.degree.size() != n || r.product.size() != n) {
    err("basis, degree and product tables disagree in size");
    return rep;
  }
  int top = 2 * r.dimension;
  if (r.degree[0] != 0) err("first basis element must be the unit (degree 0)");
  std::size_t tops = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int d = r.degree[i];
    if (d < 0 || d > top || d % 2 != 0) err("basis element " + r.basis[i] + " has degree " + std::to_string(d));
    if (i > 0 && d == 0) err("degree-0 part must be spanned by the unit alone; found " + r.basis[i]);
    if (d == top) ++tops;
  }
  if (tops != 1) err("top degree must be one-dimensional, found " + std::to_string(tops) + " elements");
  if (!rep.ok()) return rep;

  for (std::size_t i = 0; i < n; ++i) {
    Class e = r.zero();
    e[i] = 1;
    if (r.product[0][i] != e || r.product[i][0] != e) err("unit does not act as identity on " + r.basis[i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Class& p = r.product[i][j];
      int d = r.degree[i] + r.degree[j];
      if (d > top ? p != r.zero() : !r.homogeneous_of(p, d))
        err("product " + r.basis[i] + "*" + r.basis[j] + " = " + show(r, p) + " is not of degree " + std::to_string(d));
      if (j > i && r.product[i][j] != r.product[j][i])
        err("product not commutative on (" + r.basis[i] + ", " + r.basis[j] + ")");
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Class left = r.mul(r.product[i][j], r.element(r.basis[k]));
        Class right = r.mul(r.element(r.basis[i]), r.product[j][k]);
        if (left != right)
          err("associativity fails on (" + r.basis[i] + ", " + r.basis[j] + ", " + r.basis[k] + ")");
      }

  std::size_t pt = r.top_index();
  for (int d = 0; d <= top; d += 2) {
    std::vector<std::size_t> lo, hi;
    for (std::size_t i = 0; i < n; ++i) {
      if (r.degree[i] == d) lo.push_back(i);
      if (r.degree[i] == top - d) hi.push_back(i);
    }
    if (lo.size() != hi.size()) {
      err("Poincare pairing between degrees " + std::to_string(d) + " and " + std::to_string(top - d) +
          " is not square");
      continue;
    }
    Matrix<Rational> m(lo.size(), hi.size());
    for (std::size_t a = 0; a < lo.size(); ++a)
      for (std::size_t b = 0; b < hi.size(); ++b) {
        m(a, b) = r.product[lo[a]][hi[b]][pt];
        if (!is_integer(m(a, b)))
          err("pairing of " + r.basis[lo[a]] + " and " + r.basis[hi[b]] + " is not an integer");
      }
    if (!lo.empty() && is_zero(determinant(m)))
      err("Poincare pairing is degenerate in degree " + std::to_string(d));
  }
  for (const auto& di : r.declared_integrals) {
    Rational v = r.product[di.a][di.b][pt];
    if (v != di.value)
      err("declared integral of " + r.basis[di.a] + "*" + r.basis[di.b] + " is " + to_string(di.value) +
          " but the table gives " + to_string(v));
  }

  auto check_chern = [&](const Class& c, int d, const char* label) {
    if (c.size() != n) {
      err(std::string(label) + " has the wrong length");
      return;
    }
    if (!r.homogeneous_of(c, d)) err(std::string(label) + " is not of degree " + std::to_string(d));
  };
  check_chern(r.c1, 2, "c1");
  check_chern(r.c2, 4, "c2");
  check_chern(r.c3, 6, "c3");
  if (r.calabi_yau && r.c1.size() == n && r.c1 != r.zero())
    rep.warnings.push_back("ring declared Calabi-Yau but c1 = " + show(r, r.c1) + " is nonzero");
  return rep;
}

void require_valid(const Ring& r) {
  auto rep = validate_ring(r);
  if (rep.ok()) return;
  std::string msg = "ring " + r.name + " is invalid:";
  for (const auto& e : rep.errors) msg += "\n  " + e;
  fail(ErrorKind::HypothesisViolation, msg);
}

namespace {

void need_degree(const Ring& r, const Class& c, int deg, const char* what) {
  if (c.size() != r.size() || !r.homogeneous_of(c, deg))
    fail(ErrorKind::GradingError, std::string(what) + " must be a class of degree " + std::to_string(deg));
}

}  // namespace

Rational cubic_form(const Ring& r, const Class& d1, const Class& d2, const Class& d3) {
  if (r.dimension != 3) fail(ErrorKind::GradingError, "cubic form needs a threefold ring");
  need_degree(r, d1, 2, "cubic_form argument 1");
  need_degree(r, d2, 2, "cubic_form argument 2");
  need_degree(r, d3, 2, "cubic_form argument 3");
  return r.integrate(r.mul(r.mul(d1, d2), d3));
}

Rational c2_pair(const Ring& r, const Class& d) {
  if (r.dimension != 3) fail(ErrorKind::GradingError, "c2 pairing needs a threefold ring");
  need_degree(r, d, 2, "c2_pair argument");
  return r.integrate(r.mul(r.c2, d));
}

Class chern_to_ch(const Ring& r, const Rational& rank, const Class& c1, const Class& c2, const Class& c3) {
  need_degree(r, c1, 2, "c1");
  need_degree(r, c2, 4, "c2");
  need_degree(r, c3, 6, "c3");
  Class c1sq = r.mul(c1, c1);
  Class ch = scale(rank, r.unit());
  ch = add(ch, c1);
  ch = add(ch, scale(ratio(1, 2), sub(c1sq, scale(2, c2))));
  Class third = sub(r.mul(c1sq, c1), scale(3, r.mul(c1, c2)));
  ch = add(ch, scale(ratio(1, 6), add(third, scale(3, c3))));
  return ch;
}

Class todd(const Ring& r) {
  Class t = r.unit();
  t = add(t, scale(ratio(1, 2), r.c1));
  t = add(t, scale(ratio(1, 12), add(r.mul(r.c1, r.c1), r.c2)));
  t = add(t, scale(ratio(1, 24), r.mul(r.c1, r.c2)));
  return t;
}

Rational chi_grr(const Ring& r, const Class& ch) {
  if (ch.size() != r.size()) fail(ErrorKind::GradingError, "class has the wrong number of coordinates");
  return r.integrate(r.mul(ch, todd(r)));
}

Class dual_ch(const Ring& r, const Class& ch) {
  Class out(ch);
  for (std::size_t i = 0; i < out.size(); ++i)
    if ((r.degree[i] / 2) % 2 == 1) out[i] = -out[i];
  return out;
}

Class pushforward_class(const Fibration& f, const Class& a) {
  if (f.pushforward.empty()) fail(ErrorKind::MissingPushforwardTable, "fibration has no pushforward table");
  Class out = f.base.zero();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!is_zero(a[i])) out = add(out, scale(a[i], f.pushforward[i]));
  return out;
}

Class pullback_class(const Fibration& f, const Class& a) {
  if (f.pullback.empty()) fail(ErrorKind::MissingPushforwardTable, "fibration has no pullback table");
  Class out = f.total.zero();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!is_zero(a[i])) out = add(out, scale(a[i], f.pullback[i]));
  return out;
}

Class relative_todd(const Fibration& f) {
  if (f.relative_todd) return *f.relative_todd;
  // td_S is unipotent, so its inverse is a finite geometric series.
  Class nil = sub(todd(f.base), f.base.unit());
  Class inv = f.base.unit(), power = f.base.unit();
  for (int k = 1; k <= f.base.dimension; ++k) {
    power = f.base.mul(power, scale(-1, nil));
    inv = add(inv, power);
  }
  return f.total.mul(todd(f.total), pullback_class(f, inv));
}

Class pushforward_ch(const Fibration& f, const Class& ch) {
  if (ch.size() != f.total.size()) fail(ErrorKind::GradingError, "class does not live on the total ring");
  return pushforward_class(f, f.total.mul(ch, relative_todd(f)));
}

const Template& find_template(const Fibration& f, const std::string& space, long r, long d) {
  for (const auto& t : f.templates)
    if (t.space == space && t.r == r && t.d == d) return t;
  fail(ErrorKind::MissingTemplate,
       "no Chern character template for " + space + "(" + std::to_string(r) + "," + std::to_string(d) + ")");
}

Class p_class_ch(const Fibration& f, const std::string& space, long r, long d, const Class& twist) {
  const auto& t = find_template(f, space, r, d);
  if (twist.size() != f.base.size() || !f.base.homogeneous_of(twist, 2))
    fail(ErrorKind::GradingError, "twist must be a divisor class on the base");
  Rational rank = t.ch[0];
  Rational fiber_degree = pushforward_class(f, f.total.part(t.ch, 2))[0];
  if (rank != r || fiber_degree != d)
    fail(ErrorKind::TemplateMismatch, "template has rank " + to_string(rank) + " and fiber degree " +
                                          to_string(fiber_degree) + ", expected (" + std::to_string(r) + "," +
                                          std::to_string(d) + ")");
  Class twisted = f.total.mul(t.ch, pullback_class(f, f.base.exp(twist)));
  return pushforward_ch(f, twisted);
}

void validate(const Fibration& f) {
  require_valid(f.total);
  require_valid(f.base);
  if (f.base.dimension + 1 != f.total.dimension)
    fail(ErrorKind::HypothesisViolation, "fibration must have relative dimension one");
  if (!f.pushforward.empty()) {
    if (f.pushforward.size() != f.total.size())
      fail(ErrorKind::Parse, "pushforward table needs one row per total basis element");
    for (std::size_t i = 0; i < f.total.size(); ++i) {
      int d = f.total.degree[i] - 2;
      const Class& p = f.pushforward[i];
      if (d < 0 ? p != f.base.zero() : !f.base.homogeneous_of(p, d))
        fail(ErrorKind::GradingError, "pushforward of " + f.total.basis[i] + " must have degree " + std::to_string(d));
    }
  }
  if (!f.pullback.empty()) {
    if (f.pullback.size() != f.base.size())
      fail(ErrorKind::Parse, "pullback table needs one row per base basis element");
    if (f.pullback[0] != f.total.unit()) fail(ErrorKind::HypothesisViolation, "pullback must send 1 to 1");
    for (std::size_t i = 0; i < f.base.size(); ++i) {
      if (!f.total.homogeneous_of(f.pullback[i], f.base.degree[i]))
        fail(ErrorKind::GradingError, "pullback of " + f.base.basis[i] + " changes degree");
      for (std::size_t j = 0; j < f.base.size(); ++j)
        if (pullback_class(f, f.base.product[i][j]) != f.total.mul(f.pullback[i], f.pullback[j]))
          fail(ErrorKind::HypothesisViolation,
               "pullback is not multiplicative on (" + f.base.basis[i] + ", " + f.base.basis[j] + ")");
    }
    if (!f.pushforward.empty())
      for (std::size_t i = 0; i < f.base.size(); ++i)
        for (std::size_t k = 0; k < f.total.size(); ++k) {
          Class x = f.total.element(f.total.basis[k]);
          Class lhs = pushforward_class(f, f.total.mul(f.pullback[i], x));
          Class rhs = f.base.mul(f.base.element(f.base.basis[i]), pushforward_class(f, x));
          if (lhs != rhs)
            fail(ErrorKind::HypothesisViolation,
                 "projection formula fails for (" + f.base.basis[i] + ", " + f.total.basis[k] + ")");
        }
  }
  if (f.relative_todd && f.relative_todd->size() != f.total.size())
    fail(ErrorKind::Parse, "relative Todd class has the wrong length");
}

}  // namespace fmcalc::grr
