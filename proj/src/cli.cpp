#include "fmcalc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "fmcalc/errors.hpp"
#include "fmcalc/fm_lattice.hpp"
#include "fmcalc/grr.hpp"
#include "fmcalc/json_io.hpp"
#include "fmcalc/moduli_solver.hpp"
#include "fmcalc/scan.hpp"
#include "fmcalc/stability.hpp"

namespace fmcalc {

namespace {

constexpr std::uint64_t kDefaultPrime = 2305843009213693951ULL;  // 2^61 - 1

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool generic = false;
  long bound = 5;
  bool bound_given = false;
  std::string field = "rational";
  std::string out;
  int jobs = 1;
  bool table = false;
};

struct FieldChoice {
  cyc::FieldKind kind = cyc::FieldKind::Rational;
  std::uint64_t prime = 0;
};

FieldChoice parse_field(const std::string& s) {
  if (s == "rational") return {};
  if (s == "prime") return {cyc::FieldKind::Prime, kDefaultPrime};
  if (s.rfind("prime:", 0) == 0) {
    std::string digits = s.substr(6);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      fail(ErrorKind::Parse, "--field prime:p needs a decimal prime");
    return {cyc::FieldKind::Prime, std::stoull(digits)};
  }
  fail(ErrorKind::Parse, "--field must be 'rational' or 'prime:p'");
}

// Inline JSON when the argument starts with '{' or '[', else a file path.
Json load(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    try {
      return Json::parse(arg);
    } catch (const nlohmann::json::exception& ex) {
      fail(ErrorKind::Parse, std::string("inline JSON: ") + ex.what());
    }
  }
  return parse_json_file(arg);
}

grr::Ring load_ring(const Json& j) {
  grr::Ring r;
  if (j.contains("ring")) r = grr::ring_from_json(j.at("ring"), "ring");
  else if (j.contains("total")) r = grr::ring_from_json(j.at("total"), "total");
  else r = grr::ring_from_json(j, "ring");
  grr::require_valid(r);
  return r;
}

void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    if (j.empty()) rows.emplace_back(path, "{}");
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, rows);
  } else if (j.is_array()) {
    if (j.empty()) rows.emplace_back(path, "[]");
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", rows);
  } else {
    rows.emplace_back(path, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string render_table(const Json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::ostringstream os;
  for (const auto& [k, v] : rows) os << std::left << std::setw(static_cast<int>(width) + 2) << k << v << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// fm-lattice

Json cmd_transform(const std::string& kernel_arg, const std::string& class_arg) {
  auto k = fm::kernel_from_json(load(kernel_arg));
  auto v = fm::fiber_class_from_json(load(class_arg), k.source);
  fm::validate(v);
  Json j;
  j["kernel"] = fm::kernel_to_json(k);
  j["input"] = fm::fiber_class_to_json(v);
  j["output"] = fm::fiber_class_to_json(fm::transform_class(k, v));
  auto id = fm::thm3_general(k, v);
  Json ident;
  ident["annotation"] = id.annotation;
  ident["m_class"] = fm::fiber_class_to_json(id.m_class);
  ident["m_partner"] = fm::fiber_class_to_json(id.m_partner);
  if (id.bridge) {
    ident["lhs"] = fm::pclass_to_json(id.bridge->lhs);
    ident["rhs"] = fm::pclass_to_json(id.bridge->rhs);
  }
  j["identity"] = ident;
  return j;
}

Json cmd_canonicalize(const std::string& class_arg, bool generic) {
  auto p = fm::pclass_from_json(load(class_arg));
  auto c = fm::canonicalize_P(p, generic);
  Json j;
  j["input"] = fm::pclass_to_json(p);
  j["generic"] = generic;
  j["canonical"] = fm::pclass_to_json(c.value);
  Json log = Json::array();
  for (const auto& s : c.log)
    log.push_back({{"rule", fm::to_string(s.rule)}, {"before", fm::to_string(s.before)}, {"after", fm::to_string(s.after)}});
  j["log"] = log;
  return j;
}

Json cmd_equal(const std::string& lhs_arg, const std::string& rhs_arg, const std::string& kernel_arg, bool generic) {
  auto p = fm::pclass_from_json(load(lhs_arg));
  auto q = fm::pclass_from_json(load(rhs_arg));
  fm::PEqualityDecider decider;
  Json bridges = Json::array();
  if (!kernel_arg.empty()) {
    auto k = fm::kernel_from_json(load(kernel_arg));
    // Register the rank-one identity whose target side has the operand's rank.
    for (const auto* x : {&p, &q}) {
      if (x->base.space != k.target) continue;
      fm::Int num = x->base.r - k.c;
      if (num % k.a != 0) continue;
      auto id = fm::thm3_identity(k, num / k.a);
      decider.register_bridge(*id.bridge);
      bridges.push_back(id.annotation);
    }
  }
  Json j;
  j["lhs"] = fm::pclass_to_json(p);
  j["rhs"] = fm::pclass_to_json(q);
  j["generic"] = generic;
  j["bridges"] = bridges;
  j["result"] = fm::to_string(decider.equal(p, q, generic));
  return j;
}

Json cmd_kernel(const std::string& kernel_arg, std::optional<long> retwist) {
  auto k = fm::kernel_from_json(load(kernel_arg));
  Json j;
  j["kernel"] = fm::kernel_to_json(k);
  j["det"] = fm::det(k.matrix());
  j["inverse"] = fm::kernel_to_json(fm::invert_kernel(k));
  if (retwist) j["retwisted"] = fm::kernel_to_json(fm::retwist(k, *retwist));
  return j;
}

// ---------------------------------------------------------------------------
// cycle-sheaves

template <class Fn>
auto with_field(const FieldChoice& f, Fn&& fn) {
  if (f.kind == cyc::FieldKind::Prime) {
    ModP::set_modulus(f.prime);
    return fn(ModP());
  }
  return fn(Rational());
}

std::string field_name(const FieldChoice& f) {
  return f.kind == cyc::FieldKind::Prime ? "prime:" + std::to_string(f.prime) : "rational";
}

std::size_t cycle_size(const Json& j) {
  long n = integer_from_json(require(j, "n", "input"), "input.n");
  if (n < 1) fail(ErrorKind::Parse, "input.n must be positive");
  return static_cast<std::size_t>(n);
}

Json cmd_hom(const std::string& arg, const FieldChoice& field) {
  Json in = load(arg);
  auto n = cycle_size(in);
  auto e = cyc::bundle_from_json(n, require(in, "E", "input"), "E");
  auto f = cyc::bundle_from_json(n, require(in, "F", "input"), "F");
  Json j;
  j["n"] = n;
  j["field"] = field_name(field);
  with_field(field, [&](auto zero) {
    using F = decltype(zero);
    auto hom = cyc::tensor(f, cyc::dual(e));
    j["hom_dim"] = cyc::hom_dim<F>(e, f).dimension;
    j["ext1_dim"] = cyc::h1<F>(hom);
    j["chi"] = cyc::euler_char(hom);
    return 0;
  });
  return j;
}

Json cmd_simple(const std::string& arg, const FieldChoice& field) {
  Json in = load(arg);
  auto e = cyc::bundle_from_json(cycle_size(in), require(in, "bundle", "input"), "bundle");
  Json j;
  j["field"] = field_name(field);
  with_field(field, [&](auto zero) {
    using F = decltype(zero);
    j["end_dimension"] = cyc::hom_dim<F>(e, e).dimension;
    j["simple"] = cyc::is_simple<F>(e);
    return 0;
  });
  return j;
}

Json cmd_stable(const std::string& arg, const FieldChoice& field, long bound) {
  Json in = load(arg);
  auto n = cycle_size(in);
  auto e = cyc::bundle_from_json(n, require(in, "bundle", "input"), "bundle");
  cyc::PolarizedCycle pol = in.contains("polarization")
                                ? cyc::polarization_from_json(n, in.at("polarization"))
                                : cyc::induced_polarization(cyc::det_bundle(e));
  Json j;
  j["field"] = field_name(field);
  j["bound"] = bound;
  j["polarization"] = cyc::polarization_to_json(pol);
  with_field(field, [&](auto zero) {
    using F = decltype(zero);
    j["report"] = cyc::stability_to_json(cyc::is_stable<F>(e, pol, bound));
    return 0;
  });
  return j;
}

Json cmd_scan(const std::string& arg, const Globals& g, const FieldChoice& field) {
  cyc::ScanConfig cfg;
  if (!arg.empty()) {
    Json in = load(arg);
    auto get = [&](const char* key) { return integer_from_json(in.at(key), std::string("scan.") + key); };
    if (in.contains("cycle_sizes")) {
      cfg.cycle_sizes.clear();
      for (const auto& n : in.at("cycle_sizes"))
        cfg.cycle_sizes.push_back(static_cast<std::size_t>(integer_from_json(n, "scan.cycle_sizes")));
    }
    if (in.contains("rank")) cfg.rank = get("rank");
    if (in.contains("degree_min")) cfg.degree_min = get("degree_min");
    if (in.contains("degree_max")) cfg.degree_max = get("degree_max");
    if (in.contains("samples")) cfg.samples = static_cast<std::size_t>(get("samples"));
    if (in.contains("target_accepted")) cfg.target_accepted = static_cast<std::size_t>(get("target_accepted"));
    if (in.contains("spread")) cfg.spread = get("spread");
    if (in.contains("seed")) cfg.seed = static_cast<std::uint64_t>(get("seed"));
    if (in.contains("bound")) cfg.bound = get("bound");
  }
  if (g.seed_given) cfg.seed = g.seed;
  if (g.bound_given) cfg.bound = g.bound;
  cfg.field = field.kind;
  cfg.prime = field.prime;
  cfg.jobs = g.jobs;
  cyc::validate(cfg);
  return cyc::scan_to_json(cyc::prop2_scan(cfg));
}

// ---------------------------------------------------------------------------
// grr-engine

Json cmd_chi(const std::string& arg, const std::string& ch_arg) {
  auto ring = load_ring(load(arg));
  auto ch = grr::class_from_json(ring, load(ch_arg), "ch");
  Json j;
  j["ring"] = ring.name;
  j["ch"] = grr::class_to_json(ring, ch);
  j["todd"] = grr::class_to_json(ring, grr::todd(ring));
  j["chi"] = rational_to_json(grr::chi_grr(ring, ch));
  return j;
}

Json cmd_push(const std::string& arg, const std::string& ch_arg, const std::string& template_arg,
              const std::string& twist_arg) {
  auto f = grr::fibration_from_json(load(arg));
  grr::require_valid(f.total);
  grr::require_valid(f.base);
  grr::Class pushed, ch;
  Json j;
  if (!template_arg.empty()) {
    Json t = load(template_arg);
    std::string space = t.contains("space") ? t.at("space").get<std::string>() : "X";
    long r = integer_from_json(require(t, "r", "template"), "template.r");
    long d = integer_from_json(require(t, "d", "template"), "template.d");
    grr::Class twist = twist_arg.empty() ? f.base.zero() : grr::class_from_json(f.base, load(twist_arg), "twist");
    ch = grr::find_template(f, space, r, d).ch;
    pushed = grr::p_class_ch(f, space, r, d, twist);
    j["template"] = {{"space", space}, {"r", r}, {"d", d}};
    j["twist"] = grr::class_to_json(f.base, twist);
  } else {
    if (ch_arg.empty()) fail(ErrorKind::Parse, "push needs --ch or --template");
    ch = grr::class_from_json(f.total, load(ch_arg), "ch");
    pushed = grr::pushforward_ch(f, ch);
  }
  j["total"] = f.total.name;
  j["base"] = f.base.name;
  j["ch"] = grr::class_to_json(f.total, ch);
  j["relative_todd"] = grr::class_to_json(f.total, grr::relative_todd(f));
  j["pushforward"] = grr::class_to_json(f.base, pushed);
  j["chi_base"] = rational_to_json(grr::chi_grr(f.base, pushed));
  if (template_arg.empty()) j["chi_total"] = rational_to_json(grr::chi_grr(f.total, ch));
  return j;
}

Json cmd_cubic(const std::string& arg, const std::string& divisors_arg) {
  auto ring = load_ring(load(arg));
  std::vector<std::size_t> divs;
  for (std::size_t i = 0; i < ring.size(); ++i)
    if (ring.degree[i] == 2) divs.push_back(i);
  Json j;
  j["ring"] = ring.name;
  Json form = Json::array();
  for (std::size_t a = 0; a < divs.size(); ++a)
    for (std::size_t b = a; b < divs.size(); ++b)
      for (std::size_t c = b; c < divs.size(); ++c) {
        auto e = [&](std::size_t i) { return ring.element(ring.basis[divs[i]]); };
        form.push_back({{"divisors", {ring.basis[divs[a]], ring.basis[divs[b]], ring.basis[divs[c]]}},
                        {"value", rational_to_json(grr::cubic_form(ring, e(a), e(b), e(c)))}});
      }
  j["cubic_form"] = form;
  Json c2 = Json::object();
  for (auto i : divs) c2[ring.basis[i]] = rational_to_json(grr::c2_pair(ring, ring.element(ring.basis[i])));
  j["c2"] = c2;
  if (!divisors_arg.empty()) {
    Json d = load(divisors_arg);
    if (!d.is_array() || d.size() != 3) fail(ErrorKind::Parse, "--divisors expects three classes");
    std::vector<grr::Class> v;
    for (const auto& x : d) v.push_back(grr::class_from_json(ring, x, "divisor"));
    j["value"] = rational_to_json(grr::cubic_form(ring, v[0], v[1], v[2]));
  }
  return j;
}

Json cmd_solve(const std::string& arg, const Globals& g, bool synthetic, const std::string& base_arg,
               const std::string& twist, long max_rank, bool emit_input) {
  grr::SolverInput in;
  Json j;
  if (synthetic) {
    if (base_arg.empty()) fail(ErrorKind::Parse, "solve --synthetic needs --base RING");
    auto mode = grr::TwistMode::Quotient;
    if (twist == "matched") mode = grr::TwistMode::Matched;
    else if (twist != "quotient") fail(ErrorKind::Parse, "--twist must be 'quotient' or 'matched'");
    auto syn = grr::synthetic_moduli(load_ring(load(base_arg)), g.seed, mode, grr::ranks_coprime_to_5(max_rank));
    in = syn.input;
    Json planted = Json::object();
    for (std::size_t i = 0; i < syn.planted.size(); ++i)
      planted[grr::kModuliUnknowns[i]] = rational_to_json(syn.planted[i]);
    j["seed"] = g.seed;
    j["planted"] = planted;
  } else {
    if (arg.empty()) fail(ErrorKind::Parse, "solve needs a config file or --synthetic");
    in = grr::solver_input_from_json(load(arg));
  }
  if (emit_input) return grr::solver_input_to_json(in);
  j["samples"] = in.samples.size();
  j["report"] = grr::solver_report_to_json(grr::solve_moduli_invariants(in));
  if (synthetic) {
    bool recovered = j["report"]["full_rank"].get<bool>();
    for (const auto& [name, value] : j["planted"].items())
      if (j["report"]["values"][name] != value) recovered = false;
    j["recovered"] = recovered;
  }
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact calculus of relative Fourier-Mukai transforms on elliptic fibrations", "fmcalc"};
  app.require_subcommand(1);
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "seed for randomized workflows");
  app.add_flag("--generic", g.generic, "assert a generic fibration (enables periodicity)");
  auto* bound_opt = app.add_option("--bound", g.bound, "degree window [-B, B] of the stability oracle");
  app.add_option("--field", g.field, "rational | prime:p");
  app.add_option("--out", g.out, "write the report to PATH");
  app.add_option("--jobs", g.jobs, "worker threads for scans")->check(CLI::Range(1, 1024));
  app.add_flag("--table", g.table, "render a two-column table instead of JSON");

  std::string a1, a2, kernel, ch, tmpl, twist_div, divisors, base, twist_mode = "quotient";
  std::optional<long> retwist;
  long max_rank = 24;
  bool synthetic = false, emit_input = false;

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto* transform = sub("transform", "transform a fiber class by a kernel");
  transform->add_option("kernel", a1, "kernel JSON")->required();
  transform->add_option("class", a2, "class JSON")->required();
  auto* canon = sub("canonicalize", "canonical form of a P-class");
  canon->add_option("class", a1, "P-class JSON")->required();
  auto* equal = sub("equal", "decide equality of two P-classes");
  equal->add_option("lhs", a1)->required();
  equal->add_option("rhs", a2)->required();
  equal->add_option("--kernel", kernel, "register the rank-one identities of this kernel");
  auto* kern = sub("kernel", "kernel data, inverse and retwists");
  kern->add_option("kernel", a1)->required();
  kern->add_option("--retwist", retwist, "shift the universal sheaf by a pullback twist");
  auto* hom = sub("hom", "Hom and Ext^1 dimensions on an I_n cycle");
  hom->add_option("input", a1)->required();
  auto* simple = sub("simple", "simplicity of a bundle on an I_n cycle");
  simple->add_option("input", a1)->required();
  auto* stable = sub("stable", "stability of a bundle on an I_n cycle");
  stable->add_option("input", a1)->required();
  auto* scan = sub("scan", "seeded simple-versus-stable scan");
  scan->add_option("config", a1);
  auto* chi = sub("chi", "Euler characteristic by Riemann-Roch");
  chi->add_option("ring", a1)->required();
  chi->add_option("--ch", ch, "Chern character")->required();
  auto* push = sub("push", "relative pushforward of a Chern character");
  push->add_option("fibration", a1)->required();
  push->add_option("--ch", ch, "Chern character on the total space");
  push->add_option("--template", tmpl, "template {r, d, space}");
  push->add_option("--twist", twist_div, "base divisor twisting the template");
  auto* cubic = sub("cubic", "cubic intersection form and c2 pairings");
  cubic->add_option("ring", a1)->required();
  cubic->add_option("--divisors", divisors, "three divisor classes");
  auto* solve = sub("solve", "recover moduli invariants from cross-space identities");
  solve->add_option("config", a1);
  solve->add_flag("--synthetic", synthetic, "plant random invariants, generate samples and re-solve");
  solve->add_option("--base", base, "base ring for --synthetic");
  solve->add_option("--twist", twist_mode, "quotient | matched (for --synthetic)");
  solve->add_option("--max-rank", max_rank, "largest r for --synthetic");
  solve->add_flag("--emit-input", emit_input, "print the solver input instead of solving");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "fmcalc: " << e.what() << "\n";
    return 1;
  }
  g.seed_given = seed_opt->count() > 0;
  g.bound_given = bound_opt->count() > 0;

  try {
    FieldChoice field = parse_field(g.field);
    Json report;
    if (*transform) report = cmd_transform(a1, a2);
    else if (*canon) report = cmd_canonicalize(a1, g.generic);
    else if (*equal) report = cmd_equal(a1, a2, kernel, g.generic);
    else if (*kern) report = cmd_kernel(a1, retwist);
    else if (*hom) report = cmd_hom(a1, field);
    else if (*simple) report = cmd_simple(a1, field);
    else if (*stable) report = cmd_stable(a1, field, g.bound);
    else if (*scan) report = cmd_scan(a1, g, field);
    else if (*chi) report = cmd_chi(a1, ch);
    else if (*push) report = cmd_push(a1, ch, tmpl, twist_div);
    else if (*cubic) report = cmd_cubic(a1, divisors);
    else if (*solve) report = cmd_solve(a1, g, synthetic, base, twist_mode, max_rank, emit_input);

    bool one_line = *transform || *canon || *equal || *kern;
    std::string text = g.table ? render_table(report) : (one_line ? report.dump() : report.dump(2)) + "\n";
    if (g.out.empty()) {
      out << text;
    } else {
      std::ofstream f(g.out, std::ios::binary);
      if (!f) fail(ErrorKind::Parse, "cannot write " + g.out);
      f << text;
    }
    return 0;
  } catch (const Error& e) {
    err << "fmcalc: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "fmcalc: Parse: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fmcalc
