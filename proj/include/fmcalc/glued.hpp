#pragma once

// Conversions from bundle and test-sheaf data into glued node systems over a
// working field.

#include "fmcalc/cycle_sheaves.hpp"
#include "fmcalc/node_system.hpp"

namespace fmcalc::cyc {

template <class F>
Matrix<F> to_field(const Matrix<Rational>& m) {
  Matrix<F> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = field_cast<F>(m(i, j));
  return out;
}

template <class F>
NodeGluing<F> constant_gluing(const Matrix<Rational>& g) {
  return {to_field<F>(g), Matrix<F>(g.rows(), g.cols())};
}

template <class F>
GluedSheaf<F> glue_bundle(const CycleBundle& e) {
  GluedSheaf<F> s;
  s.cyclic = true;
  s.split = e.split;
  for (const auto& g : e.gluing) s.nodes.push_back(constant_gluing<F>(g));
  return s;
}

// Restriction of e to the chain C_start..C_{start+length-1}, keeping only the
// nodes interior to the chain.
template <class F>
GluedSheaf<F> glue_chain(const CycleBundle& e, std::size_t start, std::size_t length) {
  GluedSheaf<F> s;
  for (std::size_t i = 0; i < length; ++i) s.split.push_back(e.split[(start + i) % e.n]);
  for (std::size_t i = 0; i + 1 < length; ++i) s.nodes.push_back(constant_gluing<F>(e.gluing[(start + i) % e.n]));
  return s;
}

template <class F>
GluedSheaf<F> glue_test(const RankOneTestSheaf& t) {
  GluedSheaf<F> s;
  s.cyclic = t.full_cycle;
  for (long m : t.multidegree) s.split.push_back({m});
  Matrix<Rational> one = Matrix<Rational>::identity(1);
  std::size_t nodes = t.full_cycle ? t.length : t.length - 1;
  for (std::size_t i = 0; i < nodes; ++i) s.nodes.push_back(constant_gluing<F>(one));
  if (t.full_cycle) {
    auto& last = s.nodes.back();
    if (t.lambda) {
      last.g0(0, 0) = field_cast<F>(*t.lambda);
    } else {
      last.g0(0, 0) = F(0);
      last.g1(0, 0) = F(1);
    }
  }
  return s;
}

}  // namespace fmcalc::cyc
