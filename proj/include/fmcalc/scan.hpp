#pragma once

// Seeded sampling experiment comparing simplicity with stability under the
// determinant-induced polarization, on random bundles over I_n cycles.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmcalc/cycle_sheaves.hpp"

namespace fmcalc::cyc {

enum class FieldKind { Rational, Prime };

struct ScanConfig {
  std::vector<std::size_t> cycle_sizes{1};
  long rank = 2;
  long degree_min = 1;
  long degree_max = 1;
  std::size_t samples = 200;
  // When set, sampling continues in index order until this many samples have
  // a definite determinant; `samples` is then ignored.
  std::optional<std::size_t> target_accepted;
  std::uint64_t seed = 0;
  long bound = 5;
  long spread = 2;  // per-component multidegree spread of the sampler
  FieldKind field = FieldKind::Rational;
  std::uint64_t prime = 0;
  int jobs = 1;
};

void validate(const ScanConfig& cfg);

struct SampleRecord {
  std::size_t index = 0;
  CycleBundle bundle;
  Definiteness definiteness = Definiteness::Neither;
  std::string skip_reason;  // empty when evaluated
  std::size_t end_dimension = 0;
  bool simple = false;
  std::string verdict;
  Rational mu;
  bool complete = false;
  bool truncated = false;
  std::string certificate;  // human-readable destabilizer, if any
  bool certificate_verified = true;
  bool agree = true;

  bool evaluated() const { return skip_reason.empty(); }
};

struct ScanSummary {
  std::size_t drawn = 0;
  std::size_t skipped = 0;
  std::size_t evaluated = 0;
  std::size_t simple = 0;
  std::size_t stable = 0;
  std::size_t agreements = 0;
  std::size_t disagreements = 0;
  std::size_t incomplete = 0;
  std::size_t truncated = 0;
  std::size_t certificates = 0;
  std::size_t certificate_failures = 0;
  std::vector<std::size_t> counterexamples;
};

struct ScanReport {
  ScanConfig config;
  std::vector<SampleRecord> records;  // sorted by index
  ScanSummary summary;
};

// Draws and evaluates sample `index`; depends only on (config, index).
SampleRecord evaluate_sample(const ScanConfig& cfg, std::size_t index);

// Reference implementation: one sample after another.
ScanReport prop2_scan_serial(const ScanConfig& cfg);
// OpenMP over samples with cfg.jobs threads; identical output.
ScanReport prop2_scan(const ScanConfig& cfg);

ScanSummary summarize(const std::vector<SampleRecord>& records);

}  // namespace fmcalc::cyc
