#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fmcalc/errors.hpp"
#include "fmcalc/json_io.hpp"
#include "fmcalc/sampling.hpp"

using namespace fmcalc;
using namespace fmcalc::grr;

namespace {

const std::string kConfigs = FMCALC_SOURCE_DIR "/configs/";

Ring p2() { return ring_from_json(parse_json_file(kConfigs + "p2.json").at("ring"), "p2"); }
Fibration cy() { return fibration_from_json(parse_json_file(kConfigs + "elliptic_cy_p2.json")); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Parse;
}

Class random_class(SplitMix64& rng, const Ring& r) {
  Class c = r.zero();
  for (auto& x : c) x = ratio(rng.uniform(-9, 9), rng.uniform(1, 4));
  return c;
}

Class line(const Ring& r, const Class& d) { return r.exp(d); }

}  // namespace

TEST_CASE("shipped rings are valid") {
  CHECK(validate_ring(p2()).ok());
  auto f = cy();
  auto rep = validate_ring(f.total);
  CHECK(rep.ok());
  CHECK(rep.warnings.empty());
}

TEST_CASE("constructed violations are reported") {
  Json j = parse_json_file(kConfigs + "p2.json").at("ring");
  j["products"] = Json::array({Json::array({"h", "h", Json{{"pt", 2}}})});
  j["declared_integrals"] = Json::array({Json::array({"h", "h", 1})});
  auto rep = validate_ring(ring_from_json(j, "bad"));
  CHECK_FALSE(rep.ok());

  Json cyj = parse_json_file(kConfigs + "elliptic_cy_p2.json").at("total");
  cyj["c1"] = Json{{"H", 1}};
  auto warn = validate_ring(ring_from_json(cyj, "notcy"));
  CHECK(warn.warnings.size() == 1);

  Json assoc = parse_json_file(kConfigs + "elliptic_cy_p2.json").at("total");
  assoc["products"][4] = Json::array({"E", "l", Json{{"p", 1}}});  // breaks (E*E)*H = E*(E*H)
  auto bad = validate_ring(ring_from_json(assoc, "nonassoc"));
  bool saw = false;
  for (const auto& e : bad.errors)
    if (e.find("associativity") != std::string::npos) saw = true;
  CHECK(saw);
}

TEST_CASE("cubic form and c2 pairing") {
  auto f = cy();
  const auto& x = f.total;
  auto E = x.element("E"), H = x.element("H");
  CHECK(cubic_form(x, H, H, H) == 0);
  CHECK(cubic_form(x, E, E, E) == 9);
  CHECK(cubic_form(x, E, E, H) == -3);
  CHECK(cubic_form(x, E, H, H) == 1);
  CHECK(c2_pair(x, H) == 36);
  CHECK(c2_pair(x, E) == -6);
  CHECK(c2_pair(x, add(scale(3, H), E)) == 102);
  CHECK(kind_of([&] { (void)cubic_form(x, x.unit(), H, H); }) == ErrorKind::GradingError);

  SplitMix64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Class d[3];
    for (auto& di : d) di = add(scale(rng.uniform(-5, 5), E), scale(rng.uniform(-5, 5), H));
    Rational v = cubic_form(x, d[0], d[1], d[2]);
    CHECK(cubic_form(x, d[0], d[2], d[1]) == v);
    CHECK(cubic_form(x, d[1], d[0], d[2]) == v);
    CHECK(cubic_form(x, d[1], d[2], d[0]) == v);
    CHECK(cubic_form(x, d[2], d[0], d[1]) == v);
    CHECK(cubic_form(x, d[2], d[1], d[0]) == v);
    Rational s = rng.uniform(-3, 3);
    CHECK(cubic_form(x, add(d[0], scale(s, d[1])), d[1], d[2]) == v + s * cubic_form(x, d[1], d[1], d[2]));
  }
}

TEST_CASE("chern character expansion") {
  auto x = cy().total;
  auto D = add(x.element("E"), scale(2, x.element("H")));
  auto z2 = x.zero();
  CHECK(chern_to_ch(x, 1, z2, z2, z2) == x.unit());
  auto ch = chern_to_ch(x, 1, D, z2, z2);
  CHECK(x.part(ch, 4) == scale(ratio(1, 2), x.mul(D, D)));
  CHECK(x.part(ch, 6) == scale(ratio(1, 6), x.mul(D, x.mul(D, D))));
  CHECK(ch == line(x, D));
  auto c2 = x.element("f");
  CHECK(x.part(chern_to_ch(x, 2, z2, c2, z2), 4) == scale(-1, c2));
  CHECK(kind_of([&] { (void)chern_to_ch(x, 1, c2, z2, z2); }) == ErrorKind::GradingError);
}

TEST_CASE("todd classes") {
  auto x = cy().total;
  CHECK(todd(x) == add(x.unit(), scale(ratio(1, 12), x.c2)));
  CHECK(chi_grr(x, x.unit()) == 0);
  auto s = p2();
  Class expected = s.zero();
  expected[0] = 1;
  expected[1] = ratio(3, 2);
  expected[2] = 1;
  CHECK(todd(s) == expected);
}

TEST_CASE("Euler characteristics of line bundles on the plane") {
  auto s = p2();
  for (long k = -10; k <= 10; ++k)
    CHECK(chi_grr(s, line(s, scale(k, s.element("h")))) == ratio((k + 1) * (k + 2), 2));
}

TEST_CASE("structure sheaf of the elliptic threefold, fiberwise") {
  auto f = cy();
  auto s = f.base;
  // chi(O_X) = chi(O_S) - chi(K_S) with K_S = O(-3)
  Rational fiberwise = ratio(1 * 2, 2) - ratio((-3 + 1) * (-3 + 2), 2);
  CHECK(fiberwise == 0);
  CHECK(chi_grr(f.total, f.total.unit()) == fiberwise);
  auto pushed = pushforward_ch(f, f.total.unit());
  CHECK(is_zero(pushed[0]));
  CHECK(chi_grr(s, pushed) == 0);
}

TEST_CASE("relative Todd class of the shipped fibration") {
  auto f = cy();
  const auto& x = f.total;
  Class expected = x.unit();
  expected[x.index_of("H")] = ratio(-3, 2);
  expected[x.index_of("f")] = ratio(39, 4);
  expected[x.index_of("l")] = 3;
  expected[x.index_of("p")] = ratio(-9, 2);
  CHECK(relative_todd(f) == expected);
}

TEST_CASE("pushforward preserves Euler characteristics") {
  auto f = cy();
  SplitMix64 rng(20);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = random_class(rng, f.total);
    CHECK(chi_grr(f.base, pushforward_ch(f, c)) == chi_grr(f.total, c));
  }
}

TEST_CASE("point classes push forward as declared") {
  auto f = cy();
  CHECK(pushforward_class(f, f.total.element("p")) == f.base.element("pt"));
  CHECK(pushforward_class(f, f.total.element("f")) == f.base.zero());
}

TEST_CASE("P-class characters") {
  auto f = cy();
  const auto& s = f.base;
  auto h = s.element("h");
  auto base = p_class_ch(f, "X", 1, 5, s.zero());
  CHECK(base[0] == 5);

  for (long t = -3; t <= 3; ++t) {
    auto twist = scale(t, h);
    CHECK(p_class_ch(f, "X", 1, 5, twist) == s.mul(base, s.exp(twist)));
  }

  // Relative duality: P(r,-d) = -dual(P(r,d)) * exp(K_S).
  Class ks = scale(-3, h);
  for (long d : {1, 5}) {
    auto plus = p_class_ch(f, "X", 1, d, s.zero());
    auto minus = p_class_ch(f, "X", 1, -d, s.zero());
    CHECK(minus == scale(-1, s.mul(dual_ch(s, plus), s.exp(ks))));
  }

  CHECK(kind_of([&] { (void)p_class_ch(f, "X", 7, 5, s.zero()); }) == ErrorKind::MissingTemplate);
  auto broken = f;
  broken.templates[0].ch[f.total.index_of("E")] = 4;
  CHECK(kind_of([&] { (void)p_class_ch(broken, "X", 1, 5, s.zero()); }) == ErrorKind::TemplateMismatch);
  auto bare = f;
  bare.pushforward.clear();
  CHECK(kind_of([&] { (void)pushforward_ch(bare, f.total.unit()); }) == ErrorKind::MissingPushforwardTable);
  CHECK(kind_of([&] { (void)p_class_ch(f, "X", 1, 5, s.unit()); }) == ErrorKind::GradingError);
}
