#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fmcalc/errors.hpp"
#include "fmcalc/json_io.hpp"
#include "fmcalc/moduli_solver.hpp"
#include "fmcalc/sampling.hpp"

using namespace fmcalc;
using namespace fmcalc::grr;

namespace {

const std::string kConfigs = FMCALC_SOURCE_DIR "/configs/";

Ring p2() { return ring_from_json(parse_json_file(kConfigs + "p2.json").at("ring"), "p2"); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Parse;
}

std::vector<Rational> random_unknowns(SplitMix64& rng) {
  std::vector<Rational> u(6);
  for (auto& x : u) x = rng.uniform(-20, 20);
  if (u[2] == 0) u[2] = 7;
  return u;
}

std::size_t index_of(const std::string& name) {
  for (std::size_t i = 0; i < kModuliUnknowns.size(); ++i)
    if (kModuliUnknowns[i] == name) return i;
  FAIL("unknown name");
  return 0;
}

}  // namespace

TEST_CASE("parametrized moduli ring is a valid fibration") {
  SplitMix64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    auto u = random_unknowns(rng);
    u[3] = 0;
    auto f = moduli_fibration(p2(), u);
    CHECK(validate_ring(f.total).ok());
    CHECK_NOTHROW(validate(f));
    // A pullback divisor from a surface has vanishing cube.
    u[3] = 1;
    CHECK(kind_of([&] { validate(moduli_fibration(p2(), u)); }) == ErrorKind::HypothesisViolation);
  }
}

TEST_CASE("cubic form and c2 pairings of the parametrized ring") {
  std::vector<Rational> u = {3, -4, 5, 0, 12, -6};
  auto f = moduli_fibration(p2(), u);
  Class t = f.total.element("Theta"), h = f.total.element("H");
  CHECK(cubic_form(f.total, t, t, t) == 3);
  CHECK(cubic_form(f.total, t, t, h) == -4);
  CHECK(cubic_form(f.total, h, t, h) == 5);
  CHECK(cubic_form(f.total, h, h, h) == 0);
  CHECK(c2_pair(f.total, t) == 12);
  CHECK(c2_pair(f.total, h) == -6);
}

TEST_CASE("M-side pushforward matches the closed form for untwisted templates") {
  // ch = 2r exp(a Theta) with a = theta1/r + theta2/2; relative Todd of a CY
  // threefold over the plane is (1 + c2/12)(1 - 3/2 H + 5/4 F).
  SplitMix64 rng(5);
  Ring base = p2();
  for (int rep = 0; rep < 20; ++rep) {
    auto u = random_unknowns(rng);
    auto f = moduli_fibration(base, u);
    long r = rng.uniform(1, 9);
    MTemplate v{r, 5, ratio(rng.uniform(-9, 9), rng.uniform(1, 5)), 0};
    MTemplate w{2, -1, ratio(rng.uniform(-9, 9), rng.uniform(1, 5)), 0};
    Rational a = v.theta / r + w.theta / 2, R = 2 * r;
    const Rational &ttt = u[0], &tth = u[1], &thh = u[2], &hhh = u[3], &c2t = u[4], &c2h = u[5];
    Rational c0 = R * a * thh - R * Rational(3, 2) * hhh;
    Rational alpha = R * (a * a * tth / 2 - Rational(3, 2) * a * thh + c2h / 12 + Rational(5, 4) * hhh);
    Rational beta = R * (a * a * a * ttt / 6 - Rational(3, 4) * a * a * tth + a * (c2t / 12 + Rational(5, 4) * thh) -
                         c2h / 8);
    Class got = pushforward_ch(f, f.total.mul(m_template_ch(f.total, v), m_template_ch(f.total, w)));
    CHECK(got[base.index_of("1")] == c0);
    CHECK(got[base.index_of("h")] == alpha);
    CHECK(got[base.index_of("pt")] == beta);
  }
}

TEST_CASE("sample rank equals the fiber degree of the X-side class") {
  auto syn = synthetic_moduli(p2(), 3, TwistMode::Matched, ranks_coprime_to_5(24));
  for (const auto& s : syn.input.samples) {
    CHECK(s.x_class.r == 5);
    CHECK(s.x_class.d == 10 - s.m_class.r);
    CHECK(s.x_ch[0] == Rational(s.x_class.d));
  }
}

TEST_CASE("matched round trip recovers every planted unknown") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto syn = synthetic_moduli(p2(), seed, TwistMode::Matched, ranks_coprime_to_5(24));
    auto rep = solve_moduli_invariants(syn.input);
    CHECK(rep.full_rank);
    CHECK(rep.rank == 6);
    CHECK(rep.null_space.empty());
    CHECK(rep.consistent);
    for (std::size_t i = 0; i < 6; ++i) CHECK(rep.values[i] == syn.planted[i]);
  }
}

TEST_CASE("twist quotient recovers the gauge invariants and names the gauge") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto syn = synthetic_moduli(p2(), seed, TwistMode::Quotient, ranks_coprime_to_5(24));
    auto rep = solve_moduli_invariants(syn.input);
    CHECK_FALSE(rep.full_rank);
    std::size_t thh = index_of("Theta.H^2"), hhh = index_of("H^3"), tth = index_of("Theta^2.H");
    CHECK(rep.determined[thh]);
    CHECK(rep.values[thh] == syn.planted[thh]);
    CHECK(rep.determined[hhh]);
    CHECK(rep.values[hhh] == 0);
    CHECK_FALSE(rep.determined[tth]);
    auto c2h = std::find(rep.lifted.begin(), rep.lifted.end(), "(c2.H)*(c2.H)");
    REQUIRE(c2h != rep.lifted.end());
    auto col = static_cast<std::size_t>(c2h - rep.lifted.begin());
    CHECK(rep.determined[col]);
    CHECK(rep.values[col] == syn.planted[5] * syn.planted[5]);
    CHECK(std::find(rep.unresolved.begin(), rep.unresolved.end(), "Theta^2.H") != rep.unresolved.end());
  }
}

TEST_CASE("single sample leaves a positive-dimensional null space") {
  for (auto mode : {TwistMode::Matched, TwistMode::Quotient}) {
    auto syn = synthetic_moduli(p2(), 9, mode, {3});
    auto rep = solve_moduli_invariants(syn.input);
    CHECK_FALSE(rep.full_rank);
    CHECK(rep.null_space.size() > 0);
    CHECK(rep.determined[index_of("H^3")]);
    CHECK(rep.values[index_of("H^3")] == 0);
  }
}

TEST_CASE("corrupted data and mismatched samples are rejected") {
  auto syn = synthetic_moduli(p2(), 4, TwistMode::Matched, ranks_coprime_to_5(24));
  auto bad = syn.input;
  bad.samples[2].x_ch[2] += 1;
  CHECK(kind_of([&] { solve_moduli_invariants(bad); }) == ErrorKind::InconsistentSystem);

  bad = syn.input;
  bad.samples[0].x_class.d += 1;
  CHECK(kind_of([&] { solve_moduli_invariants(bad); }) == ErrorKind::TagMismatch);

  bad = syn.input;
  bad.samples[0].x_ch[0] += 1;
  CHECK(kind_of([&] { solve_moduli_invariants(bad); }) == ErrorKind::TemplateMismatch);

  bad = syn.input;
  bad.templates.erase(bad.templates.begin());
  CHECK(kind_of([&] { solve_moduli_invariants(bad); }) == ErrorKind::MissingTemplate);

  bad = syn.input;
  bad.structural["H^3"] = 1;
  CHECK(kind_of([&] { solve_moduli_invariants(bad); }) == ErrorKind::InconsistentSystem);
}
