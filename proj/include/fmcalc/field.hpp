#pragma once

// Exact scalar fields: GMP rationals (default) and a word-size prime field
// for randomized speed runs.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace fmcalc {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "3", "-3/4", " 7 ". Throws Error(Parse) on anything else.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Ceiling / floor of an exact rational.
Integer ceil(const Rational& q);
Integer floor(const Rational& q);

// Prime field element. The modulus is process-wide and must be set before
// any element is constructed; the CLI does this once from --field.
class ModP {
 public:
  ModP() = default;
  ModP(long long v);  // NOLINT(google-explicit-constructor)

  static void set_modulus(std::uint64_t p);
  static std::uint64_t modulus() { return p_; }

  std::uint64_t value() const { return v_; }

  friend ModP operator+(ModP a, ModP b);
  friend ModP operator-(ModP a, ModP b);
  friend ModP operator-(ModP a);
  friend ModP operator*(ModP a, ModP b);
  friend ModP operator/(ModP a, ModP b);
  ModP& operator+=(ModP b) { return *this = *this + b; }
  ModP& operator-=(ModP b) { return *this = *this - b; }
  ModP& operator*=(ModP b) { return *this = *this * b; }
  ModP& operator/=(ModP b) { return *this = *this / b; }
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }
  friend bool operator!=(ModP a, ModP b) { return a.v_ != b.v_; }

  ModP inverse() const;

 private:
  static inline std::uint64_t p_ = 2305843009213693951ULL;  // 2^61 - 1
  std::uint64_t v_ = 0;
};

inline bool is_zero(const ModP& a) { return a.value() == 0; }
std::string to_string(const ModP& a);

// Exact conversion of rational data into the working field.
template <class F>
F field_cast(const Rational& q);

template <>
inline Rational field_cast<Rational>(const Rational& q) {
  return q;
}

template <>
ModP field_cast<ModP>(const Rational& q);

}  // namespace fmcalc

namespace fmcalc {

// num/den in lowest terms; den != 0.
inline Rational ratio(long num, long den) {
  Rational q{Integer(num), Integer(den)};
  q.canonicalize();
  return q;
}

}  // namespace fmcalc
