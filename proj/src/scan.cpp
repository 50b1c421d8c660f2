#include "fmcalc/scan.hpp"

#include <omp.h>

#include <sstream>

#include "fmcalc/errors.hpp"
#include "fmcalc/glued.hpp"
#include "fmcalc/sampling.hpp"
#include "fmcalc/stability.hpp"

namespace fmcalc::cyc {

void validate(const ScanConfig& cfg) {
  if (cfg.cycle_sizes.empty()) fail(ErrorKind::Parse, "scan needs at least one cycle size");
  for (auto n : cfg.cycle_sizes)
    if (n == 0) fail(ErrorKind::HypothesisViolation, "cycle sizes must be positive");
  if (cfg.rank <= 0) fail(ErrorKind::InvalidRank, "rank must be positive, got " + std::to_string(cfg.rank));
  if (cfg.degree_min > cfg.degree_max) fail(ErrorKind::Parse, "degree range is empty");
  if (cfg.bound < 0) fail(ErrorKind::Parse, "bound must be nonnegative");
  if (cfg.spread < 0) fail(ErrorKind::Parse, "spread must be nonnegative");
  if (cfg.jobs < 1) fail(ErrorKind::Parse, "jobs must be at least 1");
  if (cfg.target_accepted && *cfg.target_accepted > 0 && cfg.degree_min == 0 && cfg.degree_max == 0)
    fail(ErrorKind::HypothesisViolation, "degree 0 never yields a definite determinant; target cannot be met");
}

namespace {

template <class F>
std::string describe(const Destabilizer<F>& d) {
  std::ostringstream out;
  out << to_string(d.kind) << " on " << (d.sheaf.full_cycle ? "cycle" : "chain") << " start=" << d.sheaf.start
      << " length=" << d.sheaf.length << " multidegree=(";
  for (std::size_t i = 0; i < d.sheaf.multidegree.size(); ++i)
    out << (i ? "," : "") << d.sheaf.multidegree[i];
  out << ") slope=" << fmcalc::to_string(d.slope);
  return out.str();
}

template <class F>
bool gluings_invertible(const CycleBundle& e) {
  for (const auto& g : e.gluing)
    if (is_zero(determinant(to_field<F>(g)))) return false;
  return true;
}

template <class F>
void evaluate(const ScanConfig& cfg, SampleRecord& rec) {
  const auto& e = rec.bundle;
  if (!gluings_invertible<F>(e)) {
    rec.skip_reason = "gluing singular over the working field";
    return;
  }
  auto c = induced_polarization(det_bundle(e));
  rec.end_dimension = hom_dim<F>(e, e).dimension;
  rec.simple = rec.end_dimension == 1;
  auto report = is_stable<F>(e, c, cfg.bound);
  rec.verdict = to_string(report.verdict);
  rec.mu = report.mu;
  rec.complete = report.complete;
  rec.truncated = report.truncated;
  for (const auto& d : report.candidates) {
    rec.certificate = describe(d);
    rec.certificate_verified = verify_destabilizer(e, c, d);
  }
  rec.agree = rec.simple == (report.verdict == Verdict::Stable);
}

void finish(const ScanConfig& cfg, ScanReport& report) {
  if (cfg.target_accepted) {
    std::size_t accepted = 0, keep = 0;
    for (; keep < report.records.size() && accepted < *cfg.target_accepted; ++keep)
      if (report.records[keep].evaluated()) ++accepted;
    report.records.resize(keep);
  }
  report.summary = summarize(report.records);
}

bool target_met(const ScanConfig& cfg, const std::vector<SampleRecord>& records) {
  std::size_t accepted = 0;
  for (const auto& r : records)
    if (r.evaluated()) ++accepted;
  return accepted >= *cfg.target_accepted;
}

constexpr std::size_t kBatch = 64;
constexpr std::size_t kMaxDraws = 1000000;

}  // namespace

SampleRecord evaluate_sample(const ScanConfig& cfg, std::size_t index) {
  auto rng = SplitMix64::for_sample(cfg.seed, index);
  SampleRecord rec;
  rec.index = index;
  auto pick = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(cfg.cycle_sizes.size()) - 1));
  std::size_t n = cfg.cycle_sizes[pick];
  long degree = rng.uniform(cfg.degree_min, cfg.degree_max);
  rec.bundle = random_bundle_with_degree(rng, n, static_cast<std::size_t>(cfg.rank), degree, cfg.spread);
  rec.definiteness = det_bundle(rec.bundle).definiteness;
  if (rec.definiteness == Definiteness::Neither) {
    rec.skip_reason = "determinant neither ample nor anti-ample";
    return rec;
  }
  if (cfg.field == FieldKind::Prime)
    evaluate<ModP>(cfg, rec);
  else
    evaluate<Rational>(cfg, rec);
  return rec;
}

ScanReport prop2_scan_serial(const ScanConfig& cfg) {
  validate(cfg);
  if (cfg.field == FieldKind::Prime) ModP::set_modulus(cfg.prime);
  ScanReport report;
  report.config = cfg;
  if (cfg.target_accepted) {
    for (std::size_t i = 0; !target_met(cfg, report.records); ++i) {
      if (i >= kMaxDraws) fail(ErrorKind::HypothesisViolation, "target of accepted samples not reached");
      report.records.push_back(evaluate_sample(cfg, i));
    }
  } else {
    for (std::size_t i = 0; i < cfg.samples; ++i) report.records.push_back(evaluate_sample(cfg, i));
  }
  finish(cfg, report);
  return report;
}

ScanReport prop2_scan(const ScanConfig& cfg) {
  validate(cfg);
  if (cfg.field == FieldKind::Prime) ModP::set_modulus(cfg.prime);
  ScanReport report;
  report.config = cfg;

  auto run_range = [&](std::size_t begin, std::size_t end) {
    std::vector<SampleRecord> batch(end - begin);
    auto count = static_cast<long>(batch.size());
#pragma omp parallel for schedule(dynamic) num_threads(cfg.jobs)
    for (long k = 0; k < count; ++k)
      batch[static_cast<std::size_t>(k)] = evaluate_sample(cfg, begin + static_cast<std::size_t>(k));
    for (auto& r : batch) report.records.push_back(std::move(r));
  };

  if (cfg.target_accepted) {
    for (std::size_t begin = 0; !target_met(cfg, report.records); begin += kBatch) {
      if (begin >= kMaxDraws) fail(ErrorKind::HypothesisViolation, "target of accepted samples not reached");
      run_range(begin, begin + kBatch);
    }
  } else {
    run_range(0, cfg.samples);
  }
  finish(cfg, report);
  return report;
}

ScanSummary summarize(const std::vector<SampleRecord>& records) {
  ScanSummary s;
  s.drawn = records.size();
  for (const auto& r : records) {
    if (!r.evaluated()) {
      ++s.skipped;
      continue;
    }
    ++s.evaluated;
    if (r.simple) ++s.simple;
    if (r.verdict == to_string(Verdict::Stable)) ++s.stable;
    if (r.agree) {
      ++s.agreements;
    } else {
      ++s.disagreements;
      s.counterexamples.push_back(r.index);
    }
    if (!r.complete) ++s.incomplete;
    if (r.truncated) ++s.truncated;
    if (!r.certificate.empty()) {
      ++s.certificates;
      if (!r.certificate_verified) ++s.certificate_failures;
    }
  }
  return s;
}

}  // namespace fmcalc::cyc
