#include "fmcalc/json_io.hpp"

#include <fstream>

#include "fmcalc/errors.hpp"

namespace fmcalc {

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(Integer(j.get<long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  fail(ErrorKind::Parse, where + ": expected an integer or a rational string");
}

Json rational_to_json(const Rational& q) { return to_string(q); }

long integer_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(ErrorKind::Parse, where + ": expected an integer");
  return j.get<long>();
}

const Json& require(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Parse, where + ": missing key '" + key + "'");
  return j.at(key);
}

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::Parse, path + ": " + ex.what());
  }
}

namespace fm {

KernelData kernel_from_json(const Json& j) {
  const std::string where = "kernel";
  auto get = [&](const char* key) { return integer_from_json(require(j, key, where), where + "." + key); };
  std::string source = j.contains("source") ? j.at("source").get<std::string>() : "M";
  std::string target = j.contains("target") ? j.at("target").get<std::string>() : "X";
  long n = j.contains("n") ? get("n") : 1;
  KernelData k = kernel_from_moduli(get("a"), get("b"), get("c"), n, source, target);
  if (j.contains("e") && get("e") != k.e)
    fail(ErrorKind::HypothesisViolation, "kernel: e must equal (b*c - 1)/a = " + std::to_string(k.e));
  return k;
}

Json kernel_to_json(const KernelData& k) {
  return Json{{"a", k.a}, {"b", k.b}, {"c", k.c}, {"e", k.e}, {"n", k.n}, {"source", k.source}, {"target", k.target}};
}

FiberClass fiber_class_from_json(const Json& j, const std::string& default_space) {
  const std::string where = "class";
  FiberClass v;
  v.r = integer_from_json(require(j, "r", where), where + ".r");
  v.d = integer_from_json(require(j, "d", where), where + ".d");
  v.space = j.contains("space") ? j.at("space").get<std::string>() : default_space;
  v.shift = j.contains("shift") ? integer_from_json(j.at("shift"), where + ".shift") : 0;
  return v;
}

Json fiber_class_to_json(const FiberClass& v) {
  return Json{{"r", v.r}, {"d", v.d}, {"space", v.space}, {"shift", v.shift}};
}

PClass pclass_from_json(const Json& j) {
  PClass p;
  p.base = fiber_class_from_json(j, "X");
  p.shift = p.base.shift;
  p.base.shift = 0;
  p.dual = j.contains("dual") && j.at("dual").get<bool>();
  return p;
}

Json pclass_to_json(const PClass& p) {
  return Json{{"r", p.base.r}, {"d", p.base.d}, {"space", p.base.space}, {"shift", p.shift}, {"dual", p.dual}};
}

}  // namespace fm

namespace cyc {

CycleBundle bundle_from_json(std::size_t n, const Json& j, const std::string& where) {
  CycleBundle e;
  e.n = n;
  long rank = integer_from_json(require(j, "rank", where), where + ".rank");
  if (rank <= 0) fail(ErrorKind::InvalidRank, where + ": rank must be positive");
  e.rank = static_cast<std::size_t>(rank);
  const auto& split = require(j, "split", where);
  if (!split.is_array()) fail(ErrorKind::Parse, where + ".split: expected an array");
  for (const auto& row : split) {
    if (!row.is_array()) fail(ErrorKind::Parse, where + ".split: expected rows");
    std::vector<long> r;
    for (const auto& k : row) r.push_back(integer_from_json(k, where + ".split"));
    e.split.push_back(r);
  }
  if (j.contains("gluing")) {
    for (const auto& g : j.at("gluing")) {
      if (!g.is_array() || g.size() != e.rank) fail(ErrorKind::Parse, where + ".gluing: expected rank x rank matrices");
      Matrix<Rational> m(e.rank, e.rank);
      for (std::size_t a = 0; a < e.rank; ++a) {
        if (!g[a].is_array() || g[a].size() != e.rank) fail(ErrorKind::Parse, where + ".gluing: ragged matrix");
        for (std::size_t b = 0; b < e.rank; ++b) m(a, b) = rational_from_json(g[a][b], where + ".gluing");
      }
      e.gluing.push_back(m);
    }
  } else {
    e.gluing.assign(n, Matrix<Rational>::identity(e.rank));
  }
  validate(e);
  return e;
}

Json bundle_to_json(const CycleBundle& e) {
  Json j;
  j["rank"] = e.rank;
  j["split"] = e.split;
  Json gl = Json::array();
  for (const auto& g : e.gluing) {
    Json m = Json::array();
    for (std::size_t a = 0; a < g.rows(); ++a) {
      Json row = Json::array();
      for (std::size_t b = 0; b < g.cols(); ++b) row.push_back(rational_to_json(g(a, b)));
      m.push_back(row);
    }
    gl.push_back(m);
  }
  j["gluing"] = gl;
  return j;
}

PolarizedCycle polarization_from_json(std::size_t n, const Json& j) {
  PolarizedCycle c;
  c.n = n;
  if (!j.is_array()) fail(ErrorKind::Parse, "polarization: expected an array of marked points");
  for (const auto& p : j) {
    MarkedPoint m;
    long comp = integer_from_json(require(p, "component", "polarization"), "polarization.component");
    if (comp < 0) fail(ErrorKind::HypothesisViolation, "polarization: negative component index");
    m.component = static_cast<std::size_t>(comp);
    m.coordinate = p.contains("coordinate") ? rational_from_json(p.at("coordinate"), "polarization.coordinate")
                                             : Rational(1);
    m.weight = integer_from_json(require(p, "weight", "polarization"), "polarization.weight");
    c.points.push_back(m);
  }
  validate(c);
  return c;
}

Json polarization_to_json(const PolarizedCycle& c) {
  Json a = Json::array();
  for (const auto& p : c.points)
    a.push_back({{"component", p.component}, {"coordinate", rational_to_json(p.coordinate)}, {"weight", p.weight}});
  return a;
}

Json test_sheaf_to_json(const RankOneTestSheaf& t) {
  Json j;
  j["support"] = t.full_cycle ? "cycle" : "chain";
  j["start"] = t.start;
  j["length"] = t.length;
  j["multidegree"] = t.multidegree;
  if (t.full_cycle) j["lambda"] = t.lambda ? rational_to_json(*t.lambda) : Json("algebraic");
  return j;
}

template <class F>
Json stability_to_json(const StabilityReport<F>& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["mu"] = rational_to_json(r.mu);
  j["complete"] = r.complete;
  j["truncated"] = r.truncated;
  if (r.truncated) j["warning"] = "BoundTooSmall";
  Json cands = Json::array();
  for (const auto& d : r.candidates) {
    Json c;
    c["kind"] = to_string(d.kind);
    c["sheaf"] = test_sheaf_to_json(d.sheaf);
    c["chi"] = d.chi;
    c["weight"] = d.weight;
    c["slope"] = rational_to_json(d.slope);
    c["strict"] = d.strict;
    if (d.witness) {
      c["witness_modulus"] = d.witness->modulus.str();
      c["witness_dimension"] = d.witness->kernel_dimension;
    }
    cands.push_back(c);
  }
  j["candidates"] = cands;
  return j;
}

template Json stability_to_json<Rational>(const StabilityReport<Rational>&);
template Json stability_to_json<ModP>(const StabilityReport<ModP>&);

Json scan_to_json(const ScanReport& r) {
  const auto& cfg = r.config;
  Json j;
  Json c;
  c["cycle_sizes"] = cfg.cycle_sizes;
  c["rank"] = cfg.rank;
  c["degree_min"] = cfg.degree_min;
  c["degree_max"] = cfg.degree_max;
  if (cfg.target_accepted)
    c["target_accepted"] = *cfg.target_accepted;
  else
    c["samples"] = cfg.samples;
  c["seed"] = cfg.seed;
  c["bound"] = cfg.bound;
  c["spread"] = cfg.spread;
  c["field"] = cfg.field == FieldKind::Prime ? "prime:" + std::to_string(cfg.prime) : std::string("rational");
  j["config"] = c;

  const auto& s = r.summary;
  Json a;
  a["drawn"] = s.drawn;
  a["skipped"] = s.skipped;
  a["evaluated"] = s.evaluated;
  a["simple"] = s.simple;
  a["stable"] = s.stable;
  a["agreements"] = s.agreements;
  a["disagreements"] = s.disagreements;
  a["incomplete"] = s.incomplete;
  a["truncated"] = s.truncated;
  a["certificates"] = s.certificates;
  a["certificate_failures"] = s.certificate_failures;
  a["counterexamples"] = s.counterexamples;
  j["aggregate"] = a;

  Json recs = Json::array();
  for (const auto& rec : r.records) {
    Json x;
    x["index"] = rec.index;
    x["n"] = rec.bundle.n;
    x["bundle"] = bundle_to_json(rec.bundle);
    x["determinant"] = to_string(rec.definiteness);
    if (!rec.evaluated()) {
      x["skipped"] = rec.skip_reason;
    } else {
      x["end_dimension"] = rec.end_dimension;
      x["simple"] = rec.simple;
      x["verdict"] = rec.verdict;
      x["mu"] = rational_to_json(rec.mu);
      x["complete"] = rec.complete;
      if (rec.truncated) x["warning"] = "BoundTooSmall";
      if (!rec.certificate.empty()) {
        x["certificate"] = rec.certificate;
        x["certificate_verified"] = rec.certificate_verified;
      }
      x["agree"] = rec.agree;
    }
    recs.push_back(x);
  }
  j["records"] = recs;
  return j;
}

}  // namespace cyc
}  // namespace fmcalc

namespace fmcalc::grr {

Class class_from_json(const Ring& r, const Json& j, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::Parse, where + ": a class is an object of basis-name -> coefficient");
  Class c = r.zero();
  for (const auto& [name, value] : j.items()) c[r.index_of(name)] += rational_from_json(value, where + "." + name);
  return c;
}

Json class_to_json(const Ring& r, const Class& c) {
  Json j = Json::object();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!is_zero(c[i])) j[r.basis[i]] = rational_to_json(c[i]);
  return j;
}

Ring ring_from_json(const Json& j, const std::string& where) {
  Ring r;
  r.name = j.contains("name") ? j.at("name").get<std::string>() : where;
  r.dimension = static_cast<int>(integer_from_json(require(j, "dimension", where), where + ".dimension"));
  if (r.dimension < 1 || r.dimension > 3) fail(ErrorKind::Parse, where + ": dimension must be 1, 2 or 3");
  for (const auto& b : require(j, "basis", where)) {
    r.basis.push_back(require(b, "name", where + ".basis").get<std::string>());
    r.degree.push_back(static_cast<int>(integer_from_json(require(b, "degree", where + ".basis"), where + ".basis")));
  }
  for (std::size_t i = 0; i < r.basis.size(); ++i)
    for (std::size_t k = i + 1; k < r.basis.size(); ++k)
      if (r.basis[i] == r.basis[k]) fail(ErrorKind::Parse, where + ": duplicate basis name " + r.basis[i]);
  std::size_t n = r.basis.size();
  if (n == 0) fail(ErrorKind::Parse, where + ": empty basis");
  r.product.assign(n, std::vector<Class>(n, r.zero()));
  std::vector<std::vector<bool>> given(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    r.product[0][i][i] = 1;
    r.product[i][0][i] = 1;
  }
  if (j.contains("products")) {
    for (const auto& t : j.at("products")) {
      if (!t.is_array() || t.size() != 3) fail(ErrorKind::Parse, where + ".products: expected [a, b, class] triples");
      std::size_t a = r.index_of(t[0].get<std::string>()), b = r.index_of(t[1].get<std::string>());
      r.product[a][b] = class_from_json(r, t[2], where + ".products");
      given[a][b] = true;
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (given[a][b] && !given[b][a]) r.product[b][a] = r.product[a][b];
  }
  r.c1 = j.contains("c1") ? class_from_json(r, j.at("c1"), where + ".c1") : r.zero();
  r.c2 = j.contains("c2") ? class_from_json(r, j.at("c2"), where + ".c2") : r.zero();
  r.c3 = j.contains("c3") ? class_from_json(r, j.at("c3"), where + ".c3") : r.zero();
  r.calabi_yau = j.value("calabi_yau", false);
  if (j.contains("declared_integrals"))
    for (const auto& t : j.at("declared_integrals")) {
      if (!t.is_array() || t.size() != 3) fail(ErrorKind::Parse, where + ".declared_integrals: expected [a, b, value]");
      r.declared_integrals.push_back(
          {r.index_of(t[0].get<std::string>()), r.index_of(t[1].get<std::string>()), rational_from_json(t[2], where)});
    }
  return r;
}

Json ring_to_json(const Ring& r) {
  Json j;
  j["name"] = r.name;
  j["dimension"] = r.dimension;
  Json basis = Json::array();
  for (std::size_t i = 0; i < r.size(); ++i) basis.push_back({{"name", r.basis[i]}, {"degree", r.degree[i]}});
  j["basis"] = basis;
  Json prods = Json::array();
  for (std::size_t a = 1; a < r.size(); ++a)
    for (std::size_t b = a; b < r.size(); ++b)
      if (r.product[a][b] != r.zero()) prods.push_back({r.basis[a], r.basis[b], class_to_json(r, r.product[a][b])});
  j["products"] = prods;
  j["c1"] = class_to_json(r, r.c1);
  j["c2"] = class_to_json(r, r.c2);
  j["c3"] = class_to_json(r, r.c3);
  j["calabi_yau"] = r.calabi_yau;
  return j;
}

Fibration fibration_from_json(const Json& j) {
  Fibration f;
  f.total = ring_from_json(require(j, "total", "fibration"), "total");
  f.base = ring_from_json(require(j, "base", "fibration"), "base");
  if (j.contains("pushforward")) {
    f.pushforward.assign(f.total.size(), f.base.zero());
    for (const auto& [name, value] : j.at("pushforward").items())
      f.pushforward[f.total.index_of(name)] = class_from_json(f.base, value, "pushforward." + name);
  }
  if (j.contains("pullback")) {
    f.pullback.assign(f.base.size(), f.total.zero());
    for (const auto& [name, value] : j.at("pullback").items())
      f.pullback[f.base.index_of(name)] = class_from_json(f.total, value, "pullback." + name);
  }
  if (j.contains("relative_todd")) f.relative_todd = class_from_json(f.total, j.at("relative_todd"), "relative_todd");
  if (j.contains("templates"))
    for (const auto& t : j.at("templates")) {
      Template tp;
      tp.space = t.value("space", std::string("X"));
      tp.r = integer_from_json(require(t, "r", "templates"), "templates.r");
      tp.d = integer_from_json(require(t, "d", "templates"), "templates.d");
      tp.ch = class_from_json(f.total, require(t, "ch", "templates"), "templates.ch");
      f.templates.push_back(tp);
    }
  validate(f);
  return f;
}

SolverInput solver_input_from_json(const Json& j) {
  SolverInput in;
  in.base = ring_from_json(require(j, "base", "solver"), "base");
  require_valid(in.base);
  in.kernel = fm::kernel_from_json(require(j, "kernel", "solver"));
  if (j.contains("twist")) {
    auto t = j.at("twist").get<std::string>();
    if (t == "quotient") in.twist = TwistMode::Quotient;
    else if (t == "matched") in.twist = TwistMode::Matched;
    else fail(ErrorKind::Parse, "solver.twist must be 'quotient' or 'matched'");
  }
  if (j.contains("structural")) {
    in.structural.clear();
    for (const auto& [name, value] : j.at("structural").items())
      in.structural[name] = rational_from_json(value, "solver.structural." + name);
  }
  for (const auto& t : require(j, "templates", "solver")) {
    MTemplate m;
    m.r = integer_from_json(require(t, "r", "template"), "template.r");
    m.d = integer_from_json(require(t, "d", "template"), "template.d");
    m.theta = rational_from_json(require(t, "theta", "template"), "template.theta");
    m.h = t.contains("h") ? rational_from_json(t.at("h"), "template.h") : Rational(0);
    in.templates.push_back(m);
  }
  for (const auto& s : require(j, "samples", "solver")) {
    SolverSample x;
    x.m_class = fm::fiber_class_from_json(require(s, "m", "sample"), in.kernel.source);
    x.x_class = fm::fiber_class_from_json(require(s, "x", "sample"), in.kernel.target);
    x.x_ch = class_from_json(in.base, require(s, "ch", "sample"), "sample.ch");
    in.samples.push_back(x);
  }
  return in;
}

Json solver_input_to_json(const SolverInput& in) {
  Json j;
  j["base"] = ring_to_json(in.base);
  Json k = fm::kernel_to_json(in.kernel);
  j["kernel"] = Json{{"a", k["a"]}, {"b", k["b"]}, {"c", k["c"]}, {"e", k["e"]}, {"n", k["n"]}};
  j["twist"] = to_string(in.twist);
  Json st = Json::object();
  for (const auto& [name, value] : in.structural) st[name] = rational_to_json(value);
  j["structural"] = st;
  Json ts = Json::array();
  for (const auto& t : in.templates)
    ts.push_back({{"r", t.r}, {"d", t.d}, {"theta", rational_to_json(t.theta)}, {"h", rational_to_json(t.h)}});
  j["templates"] = ts;
  Json ss = Json::array();
  for (const auto& s : in.samples)
    ss.push_back({{"m", {{"r", s.m_class.r}, {"d", s.m_class.d}}},
                  {"x", {{"r", s.x_class.r}, {"d", s.x_class.d}}},
                  {"ch", class_to_json(in.base, s.x_ch)}});
  j["samples"] = ss;
  return j;
}

Json solver_report_to_json(const SolverReport& r) {
  Json j;
  j["twist"] = to_string(r.twist);
  j["full_rank"] = r.full_rank;
  j["rank"] = r.rank;
  j["unknown_count"] = r.unknowns.size();
  Json values = Json::object();
  for (std::size_t i = 0; i < r.unknowns.size(); ++i)
    values[r.unknowns[i]] = r.determined[i] ? rational_to_json(r.values[i]) : Json(nullptr);
  j["values"] = values;
  j["unresolved"] = r.unresolved;
  Json null = Json::array();
  for (const auto& v : r.null_space) {
    Json dir = Json::object();
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!is_zero(v[i])) dir[r.unknowns[i]] = rational_to_json(v[i]);
    null.push_back(dir);
  }
  j["null_space"] = null;
  j["equations"] = r.equations;
  j["lifted_rank"] = r.lifted_rank;
  j["substitutions"] = r.substitutions;
  Json lifted = Json::object();
  for (std::size_t i = r.unknowns.size(); i < r.lifted.size(); ++i)
    lifted[r.lifted[i]] = r.determined[i] ? rational_to_json(r.values[i]) : Json(nullptr);
  j["lifted"] = lifted;
  j["consistent"] = r.consistent;
  if (!r.residual.empty()) {
    Json res = Json::array();
    for (const auto& row : r.residual) {
      Json lhs = Json::object();
      for (std::size_t i = 0; i + 1 < row.size(); ++i)
        if (!is_zero(row[i])) lhs[r.lifted[i]] = rational_to_json(row[i]);
      res.push_back({{"lhs", lhs}, {"rhs", rational_to_json(row.back())}});
    }
    j["residual"] = res;
  }
  j["notes"] = r.notes;
  return j;
}

}  // namespace fmcalc::grr
