#include "fmcalc/cycle_sheaves.hpp"

#include <algorithm>
#include <numeric>

#include "fmcalc/errors.hpp"
#include "fmcalc/glued.hpp"
#include "fmcalc/node_system.hpp"

namespace fmcalc::cyc {

long PolarizedCycle::weight_on(const std::vector<std::size_t>& components) const {
  long w = 0;
  for (const auto& p : points)
    if (std::find(components.begin(), components.end(), p.component) != components.end()) w += p.weight;
  return w;
}

long PolarizedCycle::total_weight() const {
  long w = 0;
  for (const auto& p : points) w += p.weight;
  return w;
}

void validate(const PolarizedCycle& c) {
  if (c.n == 0) fail(ErrorKind::HypothesisViolation, "cycle must have at least one component");
  for (const auto& p : c.points) {
    if (p.component >= c.n) fail(ErrorKind::HypothesisViolation, "marked point on a missing component");
    if (p.weight <= 0) fail(ErrorKind::HypothesisViolation, "polarization weights must be positive");
    if (is_zero(p.coordinate)) fail(ErrorKind::HypothesisViolation, "marked points must avoid the nodes (coordinate 0)");
  }
}

long CycleBundle::total_degree() const {
  long t = 0;
  for (const auto& row : split) t = std::accumulate(row.begin(), row.end(), t);
  return t;
}

std::vector<long> CycleBundle::multidegree() const {
  std::vector<long> m;
  for (const auto& row : split) m.push_back(std::accumulate(row.begin(), row.end(), 0L));
  return m;
}

long CycleBundle::max_split(std::size_t component) const {
  return *std::max_element(split[component].begin(), split[component].end());
}

long CycleBundle::min_split(std::size_t component) const {
  return *std::min_element(split[component].begin(), split[component].end());
}

void validate(const CycleBundle& e) {
  if (e.n == 0 || e.rank == 0) fail(ErrorKind::HypothesisViolation, "bundle needs n >= 1 and rank >= 1");
  if (e.split.size() != e.n || e.gluing.size() != e.n)
    fail(ErrorKind::HypothesisViolation, "need one splitting type and one gluing matrix per component");
  for (std::size_t j = 0; j < e.n; ++j) {
    if (e.split[j].size() != e.rank) fail(ErrorKind::HypothesisViolation, "splitting type length != rank");
    const auto& g = e.gluing[j];
    if (g.rows() != e.rank || g.cols() != e.rank) fail(ErrorKind::HypothesisViolation, "gluing matrix shape != rank");
    if (is_zero(determinant(g)))
      fail(ErrorKind::HypothesisViolation, "gluing matrix at node " + std::to_string(j) + " is singular");
  }
}

CycleBundle trivial_bundle(std::size_t n, std::size_t rank) {
  CycleBundle e;
  e.n = n;
  e.rank = rank;
  e.split.assign(n, std::vector<long>(rank, 0));
  e.gluing.assign(n, Matrix<Rational>::identity(rank));
  return e;
}

CycleBundle line_bundle(const std::vector<long>& multidegree, const Rational& lambda) {
  CycleBundle e = trivial_bundle(multidegree.size(), 1);
  for (std::size_t j = 0; j < multidegree.size(); ++j) e.split[j][0] = multidegree[j];
  e.gluing.back()(0, 0) = lambda;
  return e;
}

CycleBundle direct_sum(const CycleBundle& a, const CycleBundle& b) {
  if (a.n != b.n) fail(ErrorKind::HypothesisViolation, "direct sum of bundles on different cycles");
  CycleBundle s;
  s.n = a.n;
  s.rank = a.rank + b.rank;
  for (std::size_t j = 0; j < a.n; ++j) {
    std::vector<long> row = a.split[j];
    row.insert(row.end(), b.split[j].begin(), b.split[j].end());
    s.split.push_back(row);
    Matrix<Rational> g(s.rank, s.rank);
    for (std::size_t x = 0; x < a.rank; ++x)
      for (std::size_t y = 0; y < a.rank; ++y) g(x, y) = a.gluing[j](x, y);
    for (std::size_t x = 0; x < b.rank; ++x)
      for (std::size_t y = 0; y < b.rank; ++y) g(a.rank + x, a.rank + y) = b.gluing[j](x, y);
    s.gluing.push_back(g);
  }
  return s;
}

std::vector<std::size_t> RankOneTestSheaf::components() const {
  std::vector<std::size_t> c;
  for (std::size_t i = 0; i < length; ++i) c.push_back((start + i) % n);
  return c;
}

long RankOneTestSheaf::degree() const { return std::accumulate(multidegree.begin(), multidegree.end(), 0L); }

void validate(const RankOneTestSheaf& t) {
  if (t.n == 0 || t.length == 0 || t.length > t.n || t.start >= t.n)
    fail(ErrorKind::HypothesisViolation, "test sheaf support is not a subcurve of the cycle");
  if (t.full_cycle && t.length != t.n) fail(ErrorKind::HypothesisViolation, "full-cycle support must have length n");
  if (t.multidegree.size() != t.length) fail(ErrorKind::HypothesisViolation, "multidegree length != support length");
  if (t.lambda && is_zero(*t.lambda)) fail(ErrorKind::HypothesisViolation, "gluing parameter must be invertible");
}

long euler_char(const CycleBundle& e) { return e.total_degree(); }

long euler_char(const RankOneTestSheaf& t) { return t.degree() + (t.full_cycle ? 0 : 1); }

Rational slope_mu(const CycleBundle& e, const PolarizedCycle& c) {
  long denom = static_cast<long>(e.rank) * c.total_weight();
  if (denom == 0) fail(ErrorKind::ZeroDenominator, "polarization has no marked points");
  return ratio(euler_char(e), denom);
}

Rational slope_mu(const RankOneTestSheaf& t, const PolarizedCycle& c) {
  long denom = c.weight_on(t.components());
  if (denom == 0) fail(ErrorKind::ZeroDenominator, "support of the test sheaf misses every marked point");
  return ratio(euler_char(t), denom);
}

// --- Hom --------------------------------------------------------------------

template <class F>
HomReport hom_dim(const CycleBundle& e, const CycleBundle& f, bool with_basis) {
  if (e.n != f.n) fail(ErrorKind::HypothesisViolation, "Hom between bundles on different cycles");
  auto src = glue_bundle<F>(e), dst = glue_bundle<F>(f);
  MorphismLayout lay;
  auto pencil = build_hom_pencil(src, dst, false, &lay);
  auto kernel = nullspace(pencil.a0);
  HomReport report;
  report.dimension = kernel.size();
  if constexpr (std::is_same_v<F, Rational>) {
    if (with_basis) {
      for (const auto& v : kernel) {
        std::vector<ComponentMorphism> morphism;
        for (std::size_t j = 0; j < e.n; ++j) {
          ComponentMorphism m(f.rank, std::vector<PolyMatrixEntry>(e.rank));
          for (std::size_t b = 0; b < f.rank; ++b)
            for (std::size_t a = 0; a < e.rank; ++a) {
              long first = lay.first_col[j][b][a];
              if (first < 0) continue;
              for (long c = 0; c <= lay.degree[j][b][a]; ++c)
                m[b][a].push_back(v[static_cast<std::size_t>(first + c)]);
            }
          morphism.push_back(std::move(m));
        }
        report.basis.push_back(std::move(morphism));
      }
    }
  } else {
    (void)with_basis;
  }
  return report;
}

template <class F>
std::size_t h0(const CycleBundle& e) {
  return hom_dim<F>(trivial_bundle(e.n), e).dimension;
}

template <class F>
std::size_t h1(const CycleBundle& e) {
  return hom_dim<F>(e, trivial_bundle(e.n)).dimension;
}

template <class F>
bool is_simple(const CycleBundle& e) {
  return hom_dim<F>(e, e).dimension == 1;
}

template HomReport hom_dim<Rational>(const CycleBundle&, const CycleBundle&, bool);
template HomReport hom_dim<ModP>(const CycleBundle&, const CycleBundle&, bool);
template std::size_t h0<Rational>(const CycleBundle&);
template std::size_t h0<ModP>(const CycleBundle&);
template std::size_t h1<Rational>(const CycleBundle&);
template std::size_t h1<ModP>(const CycleBundle&);
template bool is_simple<Rational>(const CycleBundle&);
template bool is_simple<ModP>(const CycleBundle&);

// --- tensor / dual / det ----------------------------------------------------

CycleBundle tensor(const CycleBundle& e, const CycleBundle& f) {
  if (e.n != f.n) fail(ErrorKind::HypothesisViolation, "tensor of bundles on different cycles");
  CycleBundle t;
  t.n = e.n;
  t.rank = e.rank * f.rank;
  for (std::size_t j = 0; j < e.n; ++j) {
    std::vector<long> row;
    for (std::size_t a = 0; a < e.rank; ++a)
      for (std::size_t b = 0; b < f.rank; ++b) row.push_back(e.split[j][a] + f.split[j][b]);
    t.split.push_back(row);
    Matrix<Rational> g(t.rank, t.rank);
    for (std::size_t a = 0; a < e.rank; ++a)
      for (std::size_t b = 0; b < f.rank; ++b)
        for (std::size_t a2 = 0; a2 < e.rank; ++a2)
          for (std::size_t b2 = 0; b2 < f.rank; ++b2)
            g(a * f.rank + b, a2 * f.rank + b2) = e.gluing[j](a, a2) * f.gluing[j](b, b2);
    t.gluing.push_back(g);
  }
  return t;
}

CycleBundle dual(const CycleBundle& e) {
  CycleBundle d = e;
  for (auto& row : d.split)
    for (auto& k : row) k = -k;
  for (auto& g : d.gluing) {
    auto inv = inverse(g);
    if (inv.rows() == 0) fail(ErrorKind::HypothesisViolation, "singular gluing matrix");
    g = inv.transpose();
  }
  return d;
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::Ample: return "ample";
    case Definiteness::AntiAmple: return "anti-ample";
    case Definiteness::Neither: return "neither";
  }
  return "?";
}

DetReport det_bundle(const CycleBundle& e) {
  DetReport r;
  r.det.n = e.n;
  r.det.full_cycle = true;
  r.det.start = 0;
  r.det.length = e.n;
  r.det.multidegree = e.multidegree();
  // A line bundle on the cycle is determined by its multidegree and the
  // product of its node gluings.
  Rational lambda = 1;
  for (const auto& g : e.gluing) lambda *= determinant(g);
  r.det.lambda = lambda;
  bool pos = std::all_of(r.det.multidegree.begin(), r.det.multidegree.end(), [](long m) { return m > 0; });
  bool neg = std::all_of(r.det.multidegree.begin(), r.det.multidegree.end(), [](long m) { return m < 0; });
  r.definiteness = pos ? Definiteness::Ample : neg ? Definiteness::AntiAmple : Definiteness::Neither;
  return r;
}

PolarizedCycle induced_polarization(const DetReport& det) {
  if (det.definiteness == Definiteness::Neither)
    fail(ErrorKind::NotDefinite, "determinant is neither ample nor anti-ample");
  PolarizedCycle c;
  c.n = det.det.n;
  for (std::size_t j = 0; j < c.n; ++j) {
    long m = det.det.multidegree[j];
    c.points.push_back(MarkedPoint{j, Rational(1), m < 0 ? -m : m});
  }
  return c;
}

CycleBundle make_cyclic_bundle(std::size_t n, long rank, long degree, const Rational& lambda) {
  if (rank <= 0) fail(ErrorKind::InvalidRank, "rank must be positive, got " + std::to_string(rank));
  if (n == 0) fail(ErrorKind::HypothesisViolation, "cycle must have at least one component");
  auto r = static_cast<std::size_t>(rank);
  CycleBundle e = trivial_bundle(n, r);
  long slots = static_cast<long>(n) * rank;
  long base = static_cast<long>(fmcalc::floor(ratio(degree, slots)).get_si());
  long extra = degree - base * slots;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < r; ++i) {
      long slot = static_cast<long>(i * n + j);
      e.split[j][i] = base + (slot < extra ? 1 : 0);
    }
  Matrix<Rational> shift(r, r);
  for (std::size_t i = 0; i < r; ++i) shift((i + 1) % r, i) = lambda;
  e.gluing.back() = shift;
  return e;
}

}  // namespace fmcalc::cyc
