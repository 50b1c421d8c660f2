#pragma once

// Univariate polynomials over an exact field, used for the gluing parameter
// of rank-one test sheaves on a full cycle.

#include <algorithm>
#include <cassert>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fmcalc/field.hpp"

namespace fmcalc {

template <class F>
class Poly {
 public:
  Poly() = default;
  explicit Poly(F c) {
    if (!fmcalc::is_zero(c)) c_.push_back(std::move(c));
  }
  explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }

  // c0 + c1 * x
  static Poly linear(const F& c0, const F& c1) { return Poly(std::vector<F>{c0, c1}); }
  static Poly x() { return linear(F(0), F(1)); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_constant() const { return c_.size() <= 1; }
  const F& lead() const { return c_.back(); }
  F coeff(std::size_t i) const { return i < c_.size() ? c_[i] : F(0); }
  const std::vector<F>& coeffs() const { return c_; }

  F eval(const F& t) const {
    F acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<F> r(std::max(a.c_.size(), b.c_.size()), F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<F> r(a.c_);
    for (auto& v : r) v = -v;
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
  }
  friend Poly operator*(const F& s, const Poly& a) { return Poly(s) * a; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  // a = q * b + r with deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    assert(!b.is_zero());
    std::vector<F> rem(a.c_);
    if (a.degree() < b.degree()) return {Poly(), a};
    std::vector<F> quo(a.c_.size() - b.c_.size() + 1, F(0));
    F inv = F(1) / b.lead();
    for (int i = a.degree(); i >= b.degree(); --i) {
      F f = rem[i] * inv;
      if (fmcalc::is_zero(f)) continue;
      int shift = i - b.degree();
      quo[shift] = f;
      for (int j = 0; j <= b.degree(); ++j) rem[shift + j] -= f * b.c_[j];
    }
    return {Poly(std::move(quo)), Poly(std::move(rem))};
  }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }

  Poly monic() const {
    if (is_zero()) return *this;
    F inv = F(1) / lead();
    std::vector<F> r(c_);
    for (auto& v : r) v *= inv;
    return Poly(std::move(r));
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<F> r(c_.size() - 1, F(0));
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * F(static_cast<long>(i));
    return Poly(std::move(r));
  }

  std::string str(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      if (fmcalc::is_zero(c_[i])) continue;
      std::string c = to_string(c_[i]);
      if (!out.empty()) out += (c.front() == '-') ? " - " : " + ";
      else if (c.front() == '-') out += "-";
      if (c.front() == '-') c.erase(0, 1);
      if (i == 0) out += c;
      else {
        if (c != "1") out += c + "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && fmcalc::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<F> c_;
};

template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    Poly<F> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Returns (g, s, t) with s*a + t*b = g = gcd(a, b), g monic.
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> xgcd(Poly<F> a, Poly<F> b) {
  Poly<F> s0(F(1)), s1, t0, t1(F(1));
  while (!b.is_zero()) {
    auto [q, r] = divmod(a, b);
    a = std::move(b);
    b = std::move(r);
    Poly<F> s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (a.is_zero()) return {a, s0, t0};
  F inv = F(1) / a.lead();
  return {inv * a, inv * s0, inv * t0};
}

// Product of the distinct monic irreducible factors (characteristic 0, or
// primes larger than the degree).
template <class F>
Poly<F> squarefree_part(const Poly<F>& f) {
  if (f.is_constant()) return Poly<F>(F(1));
  return (f / gcd(f, f.derivative())).monic();
}

// Pairwise coprime monic polynomials whose products recover the squarefree
// parts of every input.
template <class F>
std::vector<Poly<F>> gcd_free_basis(const std::vector<Poly<F>>& inputs) {
  std::vector<Poly<F>> basis;
  for (const auto& in : inputs) {
    if (in.is_zero() || in.is_constant()) continue;
    basis.push_back(squarefree_part(in));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < basis.size() && !changed; ++j) {
        Poly<F> g = gcd(basis[i], basis[j]);
        if (g.is_constant()) continue;
        Poly<F> a = (basis[i] / g).monic(), b = (basis[j] / g).monic();
        basis.erase(basis.begin() + static_cast<long>(j));
        basis.erase(basis.begin() + static_cast<long>(i));
        for (auto* p : {&g, &a, &b})
          if (!p->is_constant()) basis.push_back(*p);
        changed = true;
      }
  }
  // Deterministic order: by degree, then coefficients.
  std::sort(basis.begin(), basis.end(), [](const Poly<F>& a, const Poly<F>& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i)
      if (a.coeff(i) != b.coeff(i)) return to_string(a.coeff(i)) < to_string(b.coeff(i));
    return false;
  });
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  return basis;
}

}  // namespace fmcalc
