#pragma once

// Linear systems A(t) = A0 + t*A1 whose unknowns are grouped into blocks.
// Decides whether some t != 0 (over the algebraic closure) admits a kernel
// vector that is nonzero on every block, and produces a checkable witness.
//
// Ranks are read off a diagonalization over F[t] by unimodular row/column
// operations: rank A(t0) = #{diagonal entries not vanishing at t0}. All
// rank jumps happen at roots of the diagonal entries, so a gcd-free basis of
// those entries partitions the parameter line into finitely many strata on
// which every rank is constant.

#include <optional>
#include <vector>

#include "fmcalc/linalg.hpp"
#include "fmcalc/poly.hpp"

namespace fmcalc {

template <class F>
struct LinearPencil {
  Matrix<F> a0, a1;                      // same shape
  std::vector<std::size_t> block_of_col;  // block index per column
  std::size_t blocks = 0;

  std::size_t rows() const { return a0.rows(); }
  std::size_t cols() const { return a0.cols(); }
  bool constant() const {
    for (std::size_t i = 0; i < a1.rows(); ++i)
      for (std::size_t j = 0; j < a1.cols(); ++j)
        if (!is_zero(a1(i, j))) return false;
    return true;
  }
  Matrix<F> at(const F& t) const {
    Matrix<F> m(rows(), cols());
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j) m(i, j) = a0(i, j) + t * a1(i, j);
    return m;
  }
};

// A kernel vector of A(t) over F[t]/(modulus), nonzero on every block modulo
// every root of the modulus.
template <class F>
struct PencilWitness {
  Poly<F> modulus;
  std::vector<Poly<F>> vector;
  bool generic = false;  // found on the open stratum
  std::size_t kernel_dimension = 0;  // over the residue ring
};

namespace detail {

template <class F>
using PolyRows = std::vector<std::vector<Poly<F>>>;

template <class F>
PolyRows<F> to_poly(const LinearPencil<F>& p, const std::vector<bool>& keep) {
  PolyRows<F> m(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j)
      if (keep[j]) m[i].push_back(Poly<F>::linear(p.a0(i, j), p.a1(i, j)));
  return m;
}

// Nonzero diagonal entries after unimodular elimination.
template <class F>
std::vector<Poly<F>> diagonalize(PolyRows<F> m) {
  std::vector<Poly<F>> diag;
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (std::size_t t = 0; t < rows && t < cols; ++t) {
    for (;;) {
      // Smallest-degree nonzero entry of the trailing block becomes pivot.
      int best = -1;
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (!m[i][j].is_zero() && (best < 0 || m[i][j].degree() < best)) {
            best = m[i][j].degree();
            bi = i;
            bj = j;
          }
      if (best < 0) return diag;
      std::swap(m[t], m[bi]);
      for (auto& row : m) std::swap(row[t], row[bj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m[i][t].is_zero()) continue;
        Poly<F> q = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] = m[i][j] - q * m[t][j];
        if (!m[i][t].is_zero()) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m[t][j].is_zero()) continue;
        Poly<F> q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] = m[i][j] - q * m[i][t];
        if (!m[t][j].is_zero()) clean = false;
      }
      if (clean) break;
    }
    diag.push_back(m[t][t].monic());
  }
  return diag;
}

template <class F>
std::size_t rank_on_stratum(const std::vector<Poly<F>>& diag, const Poly<F>* root_of) {
  if (!root_of) return diag.size();
  std::size_t r = 0;
  for (const auto& d : diag)
    if (!(d % *root_of).is_zero()) ++r;
  return r;
}

template <class F>
Poly<F> reduce(const Poly<F>& a, const Poly<F>& g) {
  return g.degree() <= 0 ? a : a % g;
}

// Kernel basis of A(t) over F[t]/(g). Whenever a pivot candidate is a zero
// divisor, g is replaced by a proper factor and elimination restarts; every
// factor of g lies in the same stratum, so any factor will do.
template <class F>
std::vector<std::vector<Poly<F>>> residue_kernel(const LinearPencil<F>& p, Poly<F>& g) {
  std::vector<bool> all(p.cols(), true);
  for (;;) {
    PolyRows<F> m = to_poly(p, all);
    for (auto& row : m)
      for (auto& e : row) e = reduce(e, g);
    std::size_t rows = m.size(), cols = p.cols();
    std::vector<std::size_t> pivots;
    bool restarted = false;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows && !restarted; ++col) {
      std::size_t sel = rows;
      for (std::size_t i = row; i < rows; ++i) {
        if (m[i][col].is_zero()) continue;
        Poly<F> h = gcd(m[i][col], g);
        if (h.is_constant()) {
          sel = i;
          break;
        }
        g = h;  // m[i][col] vanishes on the factor h
        restarted = true;
        break;
      }
      if (restarted) break;
      if (sel == rows) continue;
      std::swap(m[sel], m[row]);
      auto [gg, inv, unused] = xgcd(m[row][col], g);
      (void)gg;
      (void)unused;
      for (std::size_t j = 0; j < cols; ++j) m[row][j] = reduce(m[row][j] * inv, g);
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == row || m[i][col].is_zero()) continue;
        Poly<F> f = m[i][col];
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = reduce(m[i][j] - f * m[row][j], g);
      }
      pivots.push_back(col);
      ++row;
    }
    if (restarted) continue;
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Poly<F>>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
      if (is_pivot[free]) continue;
      std::vector<Poly<F>> v(cols);
      v[free] = Poly<F>(F(1));
      for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
      basis.push_back(std::move(v));
    }
    return basis;
  }
}

}  // namespace detail

// Checks a witness independently of how it was found: A(t) x == 0 modulo
// the witness modulus, and each block carries an entry that is a unit there.
template <class F>
bool verify_witness(const LinearPencil<F>& p, const PencilWitness<F>& w) {
  if (w.vector.size() != p.cols() || w.modulus.degree() < 1) return false;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    Poly<F> acc;
    for (std::size_t j = 0; j < p.cols(); ++j)
      acc = acc + Poly<F>::linear(p.a0(i, j), p.a1(i, j)) * w.vector[j];
    if (!(acc % w.modulus).is_zero()) return false;
  }
  std::vector<bool> unit(p.blocks, false);
  for (std::size_t j = 0; j < p.cols(); ++j) {
    Poly<F> e = w.vector[j] % w.modulus;
    if (!e.is_zero() && gcd(e, w.modulus).is_constant()) unit[p.block_of_col[j]] = true;
  }
  for (bool u : unit)
    if (!u) return false;
  // t = 0 is excluded: gluing parameters are invertible.
  return !is_zero(w.modulus.eval(F(0)));
}

namespace detail {

// Picks a stratum on which a block-full kernel vector exists: a generic
// integer point when the open stratum qualifies, else a gcd-free
// basis polynomial.
template <class F>
std::optional<Poly<F>> choose_stratum(const LinearPencil<F>& p, const std::vector<std::size_t>& block_size,
                                      bool& generic) {
  using P = Poly<F>;
  std::vector<bool> all(p.cols(), true);
  auto diag_full = diagonalize(to_poly(p, all));
  std::vector<std::vector<P>> diag_minus(p.blocks);
  for (std::size_t b = 0; b < p.blocks; ++b) {
    std::vector<bool> keep(p.cols());
    for (std::size_t j = 0; j < p.cols(); ++j) keep[j] = p.block_of_col[j] != b;
    diag_minus[b] = diagonalize(to_poly(p, keep));
  }

  std::vector<P> all_diag(diag_full);
  for (auto& d : diag_minus) all_diag.insert(all_diag.end(), d.begin(), d.end());
  all_diag.push_back(P::x());
  auto strata = gcd_free_basis(all_diag);

  auto admissible = [&](const P* root_of) {
    std::size_t rk = rank_on_stratum(diag_full, root_of);
    for (std::size_t b = 0; b < p.blocks; ++b)
      if (rk >= rank_on_stratum(diag_minus[b], root_of) + block_size[b]) return false;
    return true;
  };

  if (admissible(nullptr)) {
    generic = true;
    for (long t0 = 1;; ++t0) {
      bool hit = false;
      for (const auto& s : strata)
        if (is_zero(s.eval(F(t0)))) hit = true;
      if (!hit) return P::linear(-F(t0), F(1));
    }
  }
  generic = false;
  for (const auto& s : strata) {
    if (s == P::x()) continue;
    if (admissible(&s)) return s;
  }
  return std::nullopt;
}

}  // namespace detail

// Returns a witness when some t != 0 admits a kernel vector nonzero on every
// block; nullopt otherwise.
template <class F>
std::optional<PencilWitness<F>> find_block_full_solution(const LinearPencil<F>& p) {
  using P = Poly<F>;
  std::vector<std::size_t> block_size(p.blocks, 0);
  for (auto b : p.block_of_col) ++block_size[b];
  for (auto s : block_size)
    if (s == 0) return std::nullopt;

  bool generic = true;
  std::optional<P> chosen = p.constant() ? std::optional<P>(P::linear(-F(1), F(1)))
                                         : detail::choose_stratum(p, block_size, generic);
  if (!chosen) return std::nullopt;

  // Build an explicit kernel vector over F[t]/(g); refine g until every block
  // has a unit entry.
  P g = *chosen;
  for (;;) {
    auto basis = detail::residue_kernel(p, g);
    if (basis.empty()) return std::nullopt;
    // Each block rules out fewer than dim(kernel) exponents k (Vandermonde).
    long tries = static_cast<long>(p.blocks * basis.size()) + 1;
    for (long k = 0; k < tries; ++k) {
      std::vector<P> v(p.cols());
      for (std::size_t i = 0; i < basis.size(); ++i) {
        F c(1);
        for (long e = 0; e < k; ++e) c *= F(static_cast<long>(i) + 2);
        for (std::size_t j = 0; j < p.cols(); ++j) v[j] = v[j] + c * basis[i][j];
      }
      for (auto& e : v) e = detail::reduce(e, g);
      PencilWitness<F> w{g, v, generic, basis.size()};
      if (verify_witness(p, w)) return w;
      // Split off roots on which some block entry is a zero divisor.
      for (std::size_t j = 0; j < p.cols(); ++j) {
        if (v[j].is_zero()) continue;
        P h = gcd(v[j], g);
        if (!h.is_constant() && h != g) {
          g = (g / h).monic();
          goto refine;
        }
      }
    }
    return std::nullopt;
  refine:;
  }
}

}  // namespace fmcalc
