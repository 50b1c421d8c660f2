#include "fmcalc/sampling.hpp"

namespace fmcalc::cyc {

const char* to_string(GluingKind k) {
  switch (k) {
    case GluingKind::Dense: return "dense";
    case GluingKind::Diagonal: return "diagonal";
    case GluingKind::Identity: return "identity";
    case GluingKind::ScaledShift: return "scaled-shift";
    case GluingKind::Triangular: return "triangular";
  }
  return "?";
}

namespace {

long nonzero(SplitMix64& rng, long bound) {
  long v = rng.uniform(1, bound);
  return rng.uniform(0, 1) ? v : -v;
}

}  // namespace

GluingKind random_gluing_kind(SplitMix64& rng) {
  // Dense gluings carry most of the stable bundles, so they get half the mass.
  long k = rng.uniform(0, 7);
  return k < 4 ? GluingKind::Dense : static_cast<GluingKind>(k - 3);
}

Matrix<Rational> random_gluing(SplitMix64& rng, std::size_t rank, GluingKind kind) {
  Matrix<Rational> g(rank, rank);
  switch (kind) {
    case GluingKind::Dense:
      for (;;) {
        for (std::size_t i = 0; i < rank; ++i)
          for (std::size_t j = 0; j < rank; ++j) g(i, j) = rng.uniform(-3, 3);
        if (!is_zero(determinant(g))) break;
      }
      break;
    case GluingKind::Diagonal:
      for (std::size_t i = 0; i < rank; ++i) g(i, i) = nonzero(rng, 3);
      break;
    case GluingKind::Identity:
      g = Matrix<Rational>::identity(rank);
      break;
    case GluingKind::ScaledShift: {
      Rational s = nonzero(rng, 3);
      for (std::size_t i = 0; i < rank; ++i) g((i + 1) % rank, i) = s;
      break;
    }
    case GluingKind::Triangular:
      for (std::size_t i = 0; i < rank; ++i) {
        g(i, i) = nonzero(rng, 2);
        for (std::size_t j = i + 1; j < rank; ++j) g(i, j) = rng.uniform(-2, 2);
      }
      break;
  }
  return g;
}

CycleBundle random_bundle(SplitMix64& rng, std::size_t n, std::size_t rank, long lo, long hi) {
  CycleBundle e = trivial_bundle(n, rank);
  for (auto& row : e.split)
    for (auto& k : row) k = rng.uniform(lo, hi);
  for (auto& g : e.gluing) g = random_gluing(rng, rank, random_gluing_kind(rng));
  return e;
}

CycleBundle random_bundle_with_degree(SplitMix64& rng, std::size_t n, std::size_t rank, long degree, long spread) {
  std::vector<long> multi(n, 0);
  long magnitude = degree < 0 ? -degree : degree;
  if (magnitude >= static_cast<long>(n) && rng.uniform(0, 1) == 1) {
    long sign = degree < 0 ? -1 : 1;
    for (auto& m : multi) m = 1;
    for (long left = magnitude - static_cast<long>(n); left > 0; --left)
      ++multi[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1))];
    for (auto& m : multi) m *= sign;
  } else {
    long sum = 0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      multi[j] = rng.uniform(-spread, spread);
      sum += multi[j];
    }
    multi[n - 1] = degree - sum;
  }
  CycleBundle e = trivial_bundle(n, rank);
  auto r = static_cast<long>(rank);
  for (std::size_t j = 0; j < n; ++j) {
    long share = static_cast<long>(fmcalc::floor(ratio(multi[j], r)).get_si());
    long sum = 0;
    for (std::size_t i = 0; i + 1 < rank; ++i) {
      e.split[j][i] = share + rng.uniform(0, 1) - (rng.uniform(0, 3) == 0 ? 1 : 0);
      sum += e.split[j][i];
    }
    e.split[j][rank - 1] = multi[j] - sum;
  }
  for (auto& g : e.gluing) g = random_gluing(rng, rank, random_gluing_kind(rng));
  return e;
}

}  // namespace fmcalc::cyc
