#include "fmcalc/stability.hpp"

#include <functional>

#include "fmcalc/errors.hpp"
#include "fmcalc/glued.hpp"
#include "fmcalc/node_system.hpp"

namespace fmcalc::cyc {

const char* to_string(CandidateKind k) {
  switch (k) {
    case CandidateKind::SubLine: return "sub-line";
    case CandidateKind::QuotientLine: return "quotient-line";
    case CandidateKind::Restriction: return "restriction";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::StrictlySemistable: return "strictly-semistable";
    case Verdict::Unstable: return "unstable";
  }
  return "?";
}

void validate_polarization_for(const CycleBundle& e, const PolarizedCycle& c) {
  validate(e);
  validate(c);
  if (c.n != e.n) fail(ErrorKind::HypothesisViolation, "polarization lives on a different cycle");
  for (std::size_t j = 0; j < c.n; ++j)
    if (c.weight_on({j}) == 0)
      fail(ErrorKind::HypothesisViolation,
           "polarization carries no marked point on component " + std::to_string(j) + " and is not ample");
}

namespace {

template <class F>
LinearPencil<F> candidate_pencil(const CycleBundle& e, CandidateKind kind, RankOneTestSheaf t) {
  t.lambda.reset();
  auto test = glue_test<F>(t);
  auto host = t.full_cycle ? glue_bundle<F>(e) : glue_chain<F>(e, t.start, t.length);
  if (kind == CandidateKind::SubLine) return build_hom_pencil(test, host, !t.full_cycle);
  return build_hom_pencil(host, test, false);
}

struct Support {
  bool full_cycle;
  std::size_t start, length;
};

// Calls fn on every vector m with lo <= m <= hi and sum(m) == total, in
// lexicographic order; stops when fn returns true.
bool for_each_with_sum(const std::vector<long>& lo, const std::vector<long>& hi, long total,
                       const std::function<bool(const std::vector<long>&)>& fn) {
  std::vector<long> m(lo.size());
  std::vector<long> tail_lo(lo.size() + 1, 0), tail_hi(lo.size() + 1, 0);
  for (std::size_t i = lo.size(); i-- > 0;) {
    tail_lo[i] = tail_lo[i + 1] + lo[i];
    tail_hi[i] = tail_hi[i + 1] + hi[i];
  }
  std::function<bool(std::size_t, long)> rec = [&](std::size_t i, long left) -> bool {
    if (i == m.size()) return left == 0 ? fn(m) : false;
    long from = std::max(lo[i], left - tail_hi[i + 1]);
    long to = std::min(hi[i], left - tail_lo[i + 1]);
    for (long v = from; v <= to; ++v) {
      m[i] = v;
      if (rec(i + 1, left - v)) return true;
    }
    return false;
  };
  return rec(0, total);
}

template <class F>
class Searcher {
 public:
  Searcher(const CycleBundle& e, const PolarizedCycle& c, long bound, bool stop_first)
      : e_(e), c_(c), bound_(bound), stop_first_(stop_first) {
    validate_polarization_for(e, c);
    if (bound < 0) fail(ErrorKind::HypothesisViolation, "search bound must be nonnegative");
    report_.mu = slope_mu(e, c);
    r_ = static_cast<long>(e.rank);
    report_.complete = e.rank == 1 || (e.rank == 2 && e.n <= 2);
  }

  // strict: look for slope > mu; otherwise for slope == mu exactly.
  bool pass(bool strict) {
    strict_ = strict;
    for (const auto& s : supports(e_.rank >= 2, e_.rank >= 2 ? e_.n : e_.n - 1))
      if (sub_lines(s)) return true;
    if (e_.rank < 2) return false;
    for (const auto& s : supports(true, e_.n))
      if (quotient_lines(s)) return true;
    for (const auto& s : supports(false, e_.n - 1))
      if (restriction(s)) return true;
    return false;
  }

  StabilityReport<F> take() {
    report_.complete = report_.complete && !report_.truncated;
    return std::move(report_);
  }

 private:
  std::vector<Support> supports(bool with_full, std::size_t max_chain) const {
    std::vector<Support> out;
    if (with_full) out.push_back({true, 0, e_.n});
    for (std::size_t len = 1; len <= max_chain; ++len)
      for (std::size_t start = 0; start < e_.n; ++start) out.push_back({false, start, len});
    return out;
  }

  RankOneTestSheaf sheaf_on(const Support& s) const {
    RankOneTestSheaf t;
    t.n = e_.n;
    t.full_cycle = s.full_cycle;
    t.start = s.start;
    t.length = s.length;
    return t;
  }

  // Keeps candidates on the correct side of mu for the current pass.
  bool accept(Destabilizer<F> d) {
    d.slope = ratio(d.chi, d.weight);
    d.strict = d.slope > report_.mu;
    if (strict_ ? !d.strict : d.slope != report_.mu) return false;
    report_.candidates.push_back(std::move(d));
    return stop_first_;
  }

  void clamp(std::vector<long>& lo, std::vector<long>& hi) {
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (lo[j] < -bound_) {
        lo[j] = -bound_;
        report_.truncated = true;
      }
      if (hi[j] > bound_) {
        hi[j] = bound_;
        report_.truncated = true;
      }
    }
  }

  bool try_witness(CandidateKind kind, RankOneTestSheaf t, long chi, long weight) {
    auto pencil = candidate_pencil<F>(e_, kind, t);
    auto w = find_block_full_solution(pencil);
    if (!w) return false;
    if (t.full_cycle && w->modulus.degree() == 1) {
      if constexpr (std::is_same_v<F, Rational>) t.lambda = -w->modulus.coeff(0) / w->modulus.coeff(1);
    }
    Destabilizer<F> d;
    d.kind = kind;
    d.sheaf = std::move(t);
    d.chi = chi;
    d.weight = weight;
    d.witness = std::move(w);
    return accept(std::move(d));
  }

  bool sub_lines(const Support& s) {
    RankOneTestSheaf t = sheaf_on(s);
    auto comps = t.components();
    long w = c_.weight_on(comps);
    long eps = s.full_cycle ? 0 : 1;
    Rational target = report_.mu * w;
    long level = strict_ ? fmcalc::floor(target).get_si() + 1 - eps : fmcalc::ceil(target).get_si() - eps;

    std::size_t len = comps.size();
    std::vector<long> hi(len), lo(len);
    for (std::size_t i = 0; i < len; ++i) {
      long vanish = 0;
      if (!s.full_cycle) vanish = (i == 0 ? 1 : 0) + (i + 1 == len ? 1 : 0);
      hi[i] = e_.max_split(comps[i]) - vanish;
    }
    long hi_sum = 0;
    for (long h : hi) hi_sum += h;
    if (hi_sum < level) return false;
    for (std::size_t i = 0; i < len; ++i) lo[i] = level - (hi_sum - hi[i]);
    clamp(lo, hi);
    long lo_sum = 0;
    hi_sum = 0;
    for (std::size_t i = 0; i < len; ++i) {
      lo_sum += lo[i];
      hi_sum += hi[i];
    }
    level = std::max(level, lo_sum);
    if (level > hi_sum) return false;
    return for_each_with_sum(lo, hi, level, [&](const std::vector<long>& m) {
      RankOneTestSheaf cand = t;
      cand.multidegree = m;
      return try_witness(CandidateKind::SubLine, cand, euler_char(cand), w);
    });
  }

  bool quotient_lines(const Support& s) {
    RankOneTestSheaf t = sheaf_on(s);
    auto comps = t.components();
    long w = c_.weight_on(comps);
    long eps = s.full_cycle ? 0 : 1;
    Rational target = report_.mu * w;
    long level = strict_ ? fmcalc::ceil(target).get_si() - 1 - eps : fmcalc::floor(target).get_si() - eps;

    std::size_t len = comps.size();
    std::vector<long> lo(len), hi(len);
    for (std::size_t i = 0; i < len; ++i) lo[i] = e_.min_split(comps[i]);
    long lo_sum = 0;
    for (long l : lo) lo_sum += l;
    if (lo_sum > level) return false;
    for (std::size_t i = 0; i < len; ++i) hi[i] = level - (lo_sum - lo[i]);
    clamp(lo, hi);
    long hi_sum = 0;
    lo_sum = 0;
    for (std::size_t i = 0; i < len; ++i) {
      lo_sum += lo[i];
      hi_sum += hi[i];
    }
    level = std::min(level, hi_sum);
    if (level < lo_sum) return false;
    long chi_e = euler_char(e_);
    long weight_e = r_ * c_.total_weight();
    return for_each_with_sum(lo, hi, level, [&](const std::vector<long>& m) {
      RankOneTestSheaf cand = t;
      cand.multidegree = m;
      return try_witness(CandidateKind::QuotientLine, cand, chi_e - euler_char(cand), weight_e - w);
    });
  }

  bool restriction(const Support& s) {
    RankOneTestSheaf t = sheaf_on(s);
    long deg = 0;
    for (auto j : t.components()) {
      long m = e_.multidegree()[j];
      t.multidegree.push_back(m);
      deg += m;
    }
    Destabilizer<F> d;
    d.kind = CandidateKind::Restriction;
    d.chi = deg - r_;
    d.weight = r_ * c_.weight_on(t.components());
    d.sheaf = std::move(t);
    return accept(std::move(d));
  }

  const CycleBundle& e_;
  const PolarizedCycle& c_;
  long bound_;
  bool stop_first_;
  bool strict_ = true;
  long r_ = 1;
  StabilityReport<F> report_;
};

}  // namespace

template <class F>
StabilityReport<F> enumerate_destabilizers(const CycleBundle& e, const PolarizedCycle& c, long bound) {
  Searcher<F> s(e, c, bound, false);
  s.pass(true);
  s.pass(false);
  auto report = s.take();
  bool any_strict = false, any_equal = false;
  for (const auto& d : report.candidates) (d.strict ? any_strict : any_equal) = true;
  report.verdict = any_strict ? Verdict::Unstable : any_equal ? Verdict::StrictlySemistable : Verdict::Stable;
  return report;
}

template <class F>
StabilityReport<F> is_stable(const CycleBundle& e, const PolarizedCycle& c, long bound) {
  Searcher<F> s(e, c, bound, true);
  if (!s.pass(true)) s.pass(false);
  auto report = s.take();
  report.verdict = report.candidates.empty()      ? Verdict::Stable
                   : report.candidates[0].strict ? Verdict::Unstable
                                                  : Verdict::StrictlySemistable;
  return report;
}

template <class F>
bool verify_destabilizer(const CycleBundle& e, const PolarizedCycle& c, const Destabilizer<F>& d) {
  const auto& t = d.sheaf;
  try {
    validate(t);
  } catch (const Error&) {
    return false;
  }
  if (t.n != e.n) return false;
  auto comps = t.components();
  long r = static_cast<long>(e.rank);
  long w = c.weight_on(comps);
  long chi = 0, weight = 0;
  switch (d.kind) {
    case CandidateKind::SubLine:
      chi = euler_char(t);
      weight = w;
      break;
    case CandidateKind::QuotientLine:
      chi = euler_char(e) - euler_char(t);
      weight = r * c.total_weight() - w;
      break;
    case CandidateKind::Restriction: {
      if (t.full_cycle || t.length >= e.n || e.rank < 2) return false;
      long deg = 0;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        if (t.multidegree[i] != e.multidegree()[comps[i]]) return false;
        deg += t.multidegree[i];
      }
      chi = deg - r;
      weight = r * w;
      break;
    }
  }
  if (weight <= 0 || chi != d.chi || weight != d.weight) return false;
  Rational slope = ratio(chi, weight);
  Rational mu = slope_mu(e, c);
  if (slope != d.slope || slope < mu || d.strict != (slope > mu)) return false;
  if (d.kind == CandidateKind::Restriction) return !d.witness;
  if (!d.witness) return false;
  return verify_witness(candidate_pencil<F>(e, d.kind, t), *d.witness);
}

template StabilityReport<Rational> enumerate_destabilizers<Rational>(const CycleBundle&, const PolarizedCycle&, long);
template StabilityReport<ModP> enumerate_destabilizers<ModP>(const CycleBundle&, const PolarizedCycle&, long);
template StabilityReport<Rational> is_stable<Rational>(const CycleBundle&, const PolarizedCycle&, long);
template StabilityReport<ModP> is_stable<ModP>(const CycleBundle&, const PolarizedCycle&, long);
template bool verify_destabilizer<Rational>(const CycleBundle&, const PolarizedCycle&, const Destabilizer<Rational>&);
template bool verify_destabilizer<ModP>(const CycleBundle&, const PolarizedCycle&, const Destabilizer<ModP>&);

}  // namespace fmcalc::cyc
