#include "fmcalc/moduli_solver.hpp"

#include <algorithm>
#include <numeric>

#include "fmcalc/errors.hpp"
#include "fmcalc/linalg.hpp"
#include "fmcalc/sampling.hpp"

namespace fmcalc::grr {

namespace {

constexpr std::size_t kN = 6;
enum : std::size_t { kTTT, kTTH, kTHH, kHHH, kC2T, kC2H };

struct BaseData {
  std::size_t unit = 0, h = 0, pt = 0;
  Rational k;
};

BaseData base_data(const Ring& base) {
  if (base.dimension != 2 || base.size() != 3)
    fail(ErrorKind::HypothesisViolation, "the base must be a surface with basis {1, h, pt}");
  BaseData b;
  b.pt = base.top_index();
  for (std::size_t i = 0; i < base.size(); ++i)
    if (base.degree[i] == 2) b.h = i;
  if (base.degree[b.h] != 2) fail(ErrorKind::HypothesisViolation, "the base carries no divisor class");
  b.k = base.integrate(base.mul(base.element(base.basis[b.h]), base.element(base.basis[b.h])));
  if (is_zero(b.k)) fail(ErrorKind::HypothesisViolation, "h.h vanishes on the base");
  return b;
}

// A polynomial equation of degree <= 2 in the unknowns: lin.u + quad(u) = rhs.
struct Equation {
  std::vector<Rational> lin = std::vector<Rational>(kN, Rational(0));
  std::map<std::pair<std::size_t, std::size_t>, Rational> quad;
  Rational rhs;
};

struct Affine {
  Class at_zero;
  std::vector<Class> slope;  // per unknown
};

Class sample_char(const Ring& base, const std::vector<Rational>& u, const MTemplate& v, const MTemplate& w) {
  Fibration f = moduli_fibration(base, u);
  return pushforward_ch(f, f.total.mul(m_template_ch(f.total, v), m_template_ch(f.total, w)));
}

Affine affine_char(const Ring& base, const MTemplate& v, const MTemplate& w) {
  std::vector<Rational> u(kN, Rational(0));
  Affine a;
  a.at_zero = sample_char(base, u, v, w);
  for (std::size_t i = 0; i < kN; ++i) {
    u.assign(kN, Rational(0));
    u[i] = 1;
    a.slope.push_back(sub(sample_char(base, u, v, w), a.at_zero));
  }
  Class predicted = a.at_zero;
  for (std::size_t i = 0; i < kN; ++i) {
    u[i] = ratio(static_cast<long>(2 * i + 3), 7);
    predicted = add(predicted, scale(u[i], a.slope[i]));
  }
  if (sample_char(base, u, v, w) != predicted)
    fail(ErrorKind::HypothesisViolation, "M-side character is not affine in the unknowns");
  return a;
}

const MTemplate& find_m_template(const SolverInput& in, long r, long d) {
  for (const auto& t : in.templates)
    if (t.r == r && t.d == d) return t;
  fail(ErrorKind::MissingTemplate,
       "no template for V_M(" + std::to_string(r) + "," + std::to_string(d) + ")");
}

std::string monomial_name(std::size_t i, std::size_t j) {
  return "(" + kModuliUnknowns[i] + ")*(" + kModuliUnknowns[j] + ")";
}

bool determined(const AffineSolution<Rational>& s, std::size_t c) {
  for (const auto& v : s.kernel)
    if (!is_zero(v[c])) return false;
  return true;
}

}  // namespace

const char* to_string(TwistMode m) { return m == TwistMode::Quotient ? "quotient" : "matched"; }

Fibration moduli_fibration(const Ring& base, const std::vector<Rational>& u) {
  if (u.size() != kN) fail(ErrorKind::Parse, "expected six unknown values");
  BaseData bd = base_data(base);
  Ring m;
  m.name = "M";
  m.dimension = 3;
  m.basis = {"1", "Theta", "H", "Theta*", "H*", "p"};
  m.degree = {0, 2, 2, 4, 4, 6};
  m.product.assign(6, std::vector<Class>(6, Class(6, Rational(0))));
  auto set = [&](std::size_t i, std::size_t j, Class c) {
    m.product[i][j] = c;
    m.product[j][i] = c;
  };
  for (std::size_t i = 0; i < 6; ++i) {
    Class e(6, Rational(0));
    e[i] = 1;
    set(0, i, e);
  }
  set(1, 1, {0, 0, 0, u[kTTT], u[kTTH], 0});
  set(1, 2, {0, 0, 0, u[kTTH], u[kTHH], 0});
  set(2, 2, {0, 0, 0, u[kTHH], u[kHHH], 0});
  set(1, 3, {0, 0, 0, 0, 0, 1});
  set(2, 4, {0, 0, 0, 0, 0, 1});
  m.c1 = Class(6, Rational(0));
  m.c2 = {0, 0, 0, u[kC2T], u[kC2H], 0};
  m.c3 = Class(6, Rational(0));
  m.calabi_yau = true;

  Fibration f;
  f.total = m;
  f.base = base;
  f.pushforward.assign(6, base.zero());
  f.pushforward[1][bd.unit] = u[kTHH] / bd.k;
  f.pushforward[2][bd.unit] = u[kHHH] / bd.k;
  f.pushforward[4][bd.h] = Rational(1) / bd.k;
  f.pushforward[5][bd.pt] = 1;
  f.pullback.assign(3, m.zero());
  f.pullback[bd.unit][0] = 1;
  f.pullback[bd.h][2] = 1;
  f.pullback[bd.pt][3] = u[kTHH] / bd.k;
  f.pullback[bd.pt][4] = u[kHHH] / bd.k;
  return f;
}

Class m_template_ch(const Ring& m, const MTemplate& t) {
  if (t.r <= 0) fail(ErrorKind::InvalidRank, "template rank must be positive");
  Rational r(t.r);
  Class d = add(scale(t.theta / r, m.element("Theta")), scale(t.h / r, m.element("H")));
  return scale(r, m.exp(d));
}

SolverReport solve_moduli_invariants(const SolverInput& in) {
  BaseData bd = base_data(in.base);
  SolverReport rep;
  rep.twist = in.twist;
  rep.unknowns = kModuliUnknowns;

  std::vector<Equation> eqs;
  for (const auto& [name, value] : in.structural) {
    auto it = std::find(kModuliUnknowns.begin(), kModuliUnknowns.end(), name);
    if (it == kModuliUnknowns.end()) fail(ErrorKind::Parse, "unknown structural constraint '" + name + "'");
    Equation e;
    e.lin[static_cast<std::size_t>(it - kModuliUnknowns.begin())] = 1;
    e.rhs = value;
    eqs.push_back(e);
  }

  for (const auto& s : in.samples) {
    fm::FiberClass mc = s.m_class;
    mc.space = in.kernel.source;
    auto id = fm::thm3_general(in.kernel, mc);
    if (id.x_class.r != s.x_class.r || id.x_class.d != s.x_class.d)
      fail(ErrorKind::TagMismatch, "sample pairs V_M(" + std::to_string(mc.r) + "," + std::to_string(mc.d) +
                                       ") with the wrong X-side class");
    if (s.x_ch.size() != in.base.size()) fail(ErrorKind::GradingError, "X-side character must live on the base");
    if (s.x_ch[bd.unit] != Rational(id.x_class.d))
      fail(ErrorKind::TemplateMismatch, "X-side rank differs from the fiber degree of the X-side class");

    Affine a = affine_char(in.base, find_m_template(in, mc.r, mc.d),
                           find_m_template(in, id.m_partner.r, id.m_partner.d));
    auto linear = [&](std::size_t coord, const Rational& rhs) {
      Equation e;
      for (std::size_t i = 0; i < kN; ++i) e.lin[i] = a.slope[i][coord];
      e.rhs = rhs - a.at_zero[coord];
      return e;
    };
    if (in.twist == TwistMode::Matched) {
      for (std::size_t c = 0; c < in.base.size(); ++c) eqs.push_back(linear(c, s.x_ch[c]));
      continue;
    }
    const Rational& c0 = s.x_ch[bd.unit];
    eqs.push_back(linear(bd.unit, c0));
    if (is_zero(c0)) {
      eqs.push_back(linear(bd.h, s.x_ch[bd.h]));
      continue;
    }
    // k alpha^2 / (2 c0) - beta is invariant under twisting by exp(t h).
    Rational w = bd.k / (2 * c0);
    const Rational& a0 = a.at_zero[bd.h];
    Equation e;
    for (std::size_t i = 0; i < kN; ++i) {
      e.lin[i] = 2 * w * a0 * a.slope[i][bd.h] - a.slope[i][bd.pt];
      for (std::size_t j = i; j < kN; ++j) {
        Rational q = w * a.slope[i][bd.h] * a.slope[j][bd.h] * (i == j ? 1 : 2);
        if (!is_zero(q)) e.quad[{i, j}] = q;
      }
    }
    const Rational& ax = s.x_ch[bd.h];
    e.rhs = w * ax * ax - s.x_ch[bd.pt] - (w * a0 * a0 - a.at_zero[bd.pt]);
    eqs.push_back(e);
  }

  // Lift the products of every unknown that occurs in a quadratic term.
  std::vector<bool> in_quad(kN, false);
  for (const auto& e : eqs)
    for (const auto& [ij, q] : e.quad) in_quad[ij.first] = in_quad[ij.second] = true;
  std::vector<std::pair<std::size_t, std::size_t>> monos;
  for (std::size_t i = 0; i < kN; ++i)
    for (std::size_t j = i; j < kN; ++j)
      if (in_quad[i] && in_quad[j]) monos.emplace_back(i, j);
  auto mono_col = [&](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    auto it = std::find(monos.begin(), monos.end(), std::make_pair(i, j));
    return kN + static_cast<std::size_t>(it - monos.begin());
  };

  // Products of linear equations with lifted unknowns stay linear.
  std::size_t base_eqs = eqs.size();
  for (std::size_t n = 0; n < base_eqs; ++n) {
    if (!eqs[n].quad.empty()) continue;
    bool inside = true;
    for (std::size_t i = 0; i < kN; ++i)
      if (!is_zero(eqs[n].lin[i]) && !in_quad[i]) inside = false;
    if (!inside) continue;
    for (std::size_t j = 0; j < kN; ++j) {
      if (!in_quad[j]) continue;
      Equation e;
      for (std::size_t i = 0; i < kN; ++i)
        if (!is_zero(eqs[n].lin[i])) e.quad[{std::min(i, j), std::max(i, j)}] += eqs[n].lin[i];
      e.lin[j] = -eqs[n].rhs;
      eqs.push_back(e);
    }
  }

  std::size_t cols = kN + monos.size();
  rep.lifted = kModuliUnknowns;
  for (auto [i, j] : monos) rep.lifted.push_back(monomial_name(i, j));

  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (const auto& e : eqs) {
    std::vector<Rational> row(cols, Rational(0));
    for (std::size_t i = 0; i < kN; ++i) row[i] = e.lin[i];
    for (const auto& [ij, q] : e.quad) row[mono_col(ij.first, ij.second)] += q;
    rows.push_back(std::move(row));
    rhs.push_back(e.rhs);
  }
  rep.equations = rows.size();

  auto solve = [&]() {
    Matrix<Rational> m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    auto s = solve_affine(m, rhs);
    if (!s) fail(ErrorKind::InconsistentSystem, "the sample equations admit no common solution");
    return *s;
  };
  auto sol = solve();
  rep.lifted_rank = sol.rank;

  // Fix lifted products whose factors are already determined.
  for (bool progress = true; progress;) {
    progress = false;
    for (auto [i, j] : monos) {
      std::size_t c = mono_col(i, j);
      if (!determined(sol, i) || !determined(sol, j)) continue;
      Rational product = sol.particular[i] * sol.particular[j];
      if (determined(sol, c)) {
        if (sol.particular[c] != product)
          fail(ErrorKind::InconsistentSystem, "lifted monomial " + monomial_name(i, j) + " disagrees with its factors");
        continue;
      }
      std::vector<Rational> row(cols, Rational(0));
      row[c] = 1;
      rows.push_back(row);
      rhs.push_back(product);
      ++rep.substitutions;
      progress = true;
    }
    if (progress) sol = solve();
  }

  rep.values = sol.particular;
  for (std::size_t c = 0; c < cols; ++c) rep.determined.push_back(determined(sol, c));

  Matrix<Rational> proj(sol.kernel.size(), kN);
  for (std::size_t r = 0; r < sol.kernel.size(); ++r)
    for (std::size_t i = 0; i < kN; ++i) proj(r, i) = sol.kernel[r][i];
  auto pivots = rref(proj);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    std::vector<Rational> v(kN);
    for (std::size_t i = 0; i < kN; ++i) v[i] = proj(r, i);
    rep.null_space.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < kN; ++i)
    if (!rep.determined[i]) rep.unresolved.push_back(kModuliUnknowns[i]);
  rep.rank = kN - rep.null_space.size();
  rep.full_rank = rep.unresolved.empty();

  if (!rep.full_rank) {
    Matrix<Rational> aug(rows.size(), cols + 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) aug(i, j) = rows[i][j];
      aug(i, cols) = rhs[i];
    }
    auto piv = rref(aug);
    for (std::size_t r = 0; r < piv.size(); ++r) {
      std::vector<Rational> row(cols + 1);
      for (std::size_t j = 0; j <= cols; ++j) row[j] = aug(r, j);
      rep.residual.push_back(std::move(row));
    }
  } else {
    for (std::size_t n = 0; n < base_eqs; ++n) {
      Rational lhs;
      for (std::size_t i = 0; i < kN; ++i) lhs += eqs[n].lin[i] * sol.particular[i];
      for (const auto& [ij, q] : eqs[n].quad) lhs += q * sol.particular[ij.first] * sol.particular[ij.second];
      if (lhs != eqs[n].rhs) rep.consistent = false;
    }
    if (!rep.consistent) fail(ErrorKind::InconsistentSystem, "the solution violates a sample equation");
  }

  if (in.twist == TwistMode::Quotient)
    rep.notes.push_back(
        "twist ambiguity quotiented: each sample contributes its rank and the invariant "
        "k*alpha^2/(2*rank) - beta; Theta -> Theta + lambda*H is invisible in this mode");
  else
    rep.notes.push_back("representatives matched: every base coordinate of every sample is equated");
  return rep;
}

std::vector<long> ranks_coprime_to_5(long bound) {
  std::vector<long> out;
  for (long r = 1; r <= bound; ++r)
    if (r % 5 != 0) out.push_back(r);
  return out;
}

SyntheticModuli synthetic_moduli(const Ring& base, std::uint64_t seed, TwistMode mode,
                                 const std::vector<long>& ranks, long range) {
  BaseData bd = base_data(base);
  SplitMix64 rng(seed);
  SyntheticModuli out;
  out.planted.assign(kN, Rational(0));
  out.planted[kTTT] = rng.uniform(-range, range);
  out.planted[kTTH] = rng.uniform(-range, range);
  long thh = 0;
  while (thh == 0) thh = rng.uniform(-range, range);
  out.planted[kTHH] = thh;
  out.planted[kC2T] = rng.uniform(-range, range);
  out.planted[kC2H] = rng.uniform(-range, range);

  SolverInput& in = out.input;
  in.base = base;
  in.kernel = fm::kernel_from_moduli(1, 2, 0, 5);
  in.twist = mode;
  Rational per_degree = bd.k / out.planted[kTHH];
  MTemplate partner{in.kernel.b, in.kernel.e, in.kernel.e * per_degree, rng.uniform(-3, 3)};
  in.templates.push_back(partner);

  Fibration f = moduli_fibration(base, out.planted);
  Class h = base.element(base.basis[bd.h]);
  for (long r : ranks) {
    if (std::gcd(r, 5L) != 1) fail(ErrorKind::HypothesisViolation, "ranks must be coprime to 5");
    MTemplate t{r, 5, 5 * per_degree, rng.uniform(-3, 3)};
    in.templates.push_back(t);
    SolverSample s;
    s.m_class = fm::FiberClass{r, 5, in.kernel.source, 0};
    s.x_class = fm::transform_class(in.kernel, s.m_class);
    s.x_ch = pushforward_ch(f, f.total.mul(m_template_ch(f.total, t), m_template_ch(f.total, partner)));
    if (mode == TwistMode::Quotient) s.x_ch = base.mul(s.x_ch, base.exp(scale(rng.uniform(-3, 3), h)));
    in.samples.push_back(s);
  }
  return out;
}

}  // namespace fmcalc::grr
