#include "fmcalc/field.hpp"

#include <cctype>

#include "fmcalc/errors.hpp"

namespace fmcalc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+')
    fail(ErrorKind::Parse, "not an exact rational: '" + std::string(text) + "'");
  std::string n(num);
  if (!n.empty() && n.front() == '+') n.erase(0, 1);
  Integer d{std::string(den)};
  if (d == 0) fail(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
  Rational q{Integer{n}, d};
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// --- ModP -------------------------------------------------------------------

void ModP::set_modulus(std::uint64_t p) {
  if (p < 3 || p >= (1ULL << 62)) fail(ErrorKind::Parse, "prime modulus out of range");
  mpz_class z(std::to_string(p));
  if (mpz_probab_prime_p(z.get_mpz_t(), 30) == 0)
    fail(ErrorKind::Parse, "modulus " + std::to_string(p) + " is not prime");
  p_ = p;
}

ModP::ModP(long long v) {
  long long m = static_cast<long long>(v % static_cast<long long>(p_));
  if (m < 0) m += static_cast<long long>(p_);
  v_ = static_cast<std::uint64_t>(m);
}

ModP operator+(ModP a, ModP b) {
  ModP r;
  r.v_ = a.v_ + b.v_;
  if (r.v_ >= ModP::p_) r.v_ -= ModP::p_;
  return r;
}

ModP operator-(ModP a, ModP b) {
  ModP r;
  r.v_ = a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + ModP::p_ - b.v_;
  return r;
}

ModP operator-(ModP a) { return ModP(0) - a; }

ModP operator*(ModP a, ModP b) {
  ModP r;
  r.v_ = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a.v_) * b.v_) % ModP::p_);
  return r;
}

ModP ModP::inverse() const {
  if (v_ == 0) fail(ErrorKind::ZeroDenominator, "inverse of zero in prime field");
  // Fermat: a^(p-2).
  ModP base = *this, acc(1);
  std::uint64_t e = p_ - 2;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

ModP operator/(ModP a, ModP b) { return a * b.inverse(); }

std::string to_string(const ModP& a) { return std::to_string(a.value()); }

template <>
ModP field_cast<ModP>(const Rational& q) {
  mpz_class p(std::to_string(ModP::modulus()));
  mpz_class n = q.get_num() % p, d = q.get_den() % p;
  if (n < 0) n += p;
  if (d == 0) fail(ErrorKind::ZeroDenominator, "denominator of " + q.get_str() + " vanishes mod p");
  return ModP(static_cast<long long>(n.get_ui())) / ModP(static_cast<long long>(d.get_ui()));
}

}  // namespace fmcalc
