#pragma once

// Assembles the linear system whose kernel is Hom(src, dst) for sheaves
// living on a common chain or cycle of components.

#include <vector>

#include "fmcalc/linalg.hpp"
#include "fmcalc/pencil.hpp"

namespace fmcalc::cyc {

// Gluing at a node, affine in the gluing parameter t: g(t) = g0 + t*g1.
template <class F>
struct NodeGluing {
  Matrix<F> g0, g1;
};

// A split bundle on each support component plus gluings at retained nodes.
// For a chain, nodes[i] joins piece i to piece i+1; for a cycle there is one
// more node joining the last piece to the first.
template <class F>
struct GluedSheaf {
  std::vector<std::vector<long>> split;
  std::vector<NodeGluing<F>> nodes;
  bool cyclic = false;

  std::size_t rank() const { return split.empty() ? 0 : split.front().size(); }
};

// Column layout of the unknown morphism: per piece j, per (dst b, src a),
// coefficients 0..l_b - k_a.
struct MorphismLayout {
  std::vector<std::vector<std::vector<long>>> first_col;  // [piece][b][a], -1 if absent
  std::vector<std::vector<std::vector<long>>> degree;     // [piece][b][a]
  std::size_t cols = 0;
};

template <class F>
MorphismLayout layout_for(const GluedSheaf<F>& src, const GluedSheaf<F>& dst) {
  MorphismLayout lay;
  std::size_t pieces = src.split.size();
  lay.first_col.resize(pieces);
  lay.degree.resize(pieces);
  for (std::size_t j = 0; j < pieces; ++j) {
    lay.first_col[j].assign(dst.rank(), std::vector<long>(src.rank(), -1));
    lay.degree[j].assign(dst.rank(), std::vector<long>(src.rank(), -1));
    for (std::size_t b = 0; b < dst.rank(); ++b)
      for (std::size_t a = 0; a < src.rank(); ++a) {
        long deg = dst.split[j][b] - src.split[j][a];
        lay.degree[j][b][a] = deg;
        if (deg < 0) continue;
        lay.first_col[j][b][a] = static_cast<long>(lay.cols);
        lay.cols += static_cast<std::size_t>(deg + 1);
      }
  }
  return lay;
}

// Rows: at every retained node, dst_gluing * Phi_j(inf) = Phi_next(0) * src_gluing.
// With vanish_at_ends, Phi_first(0) = 0 and Phi_last(inf) = 0 as well (maps
// out of a sheaf pushed forward from a chain whose end nodes are cut open).
template <class F>
LinearPencil<F> build_hom_pencil(const GluedSheaf<F>& src, const GluedSheaf<F>& dst, bool vanish_at_ends,
                                 MorphismLayout* layout_out = nullptr) {
  MorphismLayout lay = layout_for(src, dst);
  std::size_t pieces = src.split.size();
  std::size_t rs = src.rank(), rd = dst.rank();
  std::size_t node_count = src.nodes.size();
  std::size_t rows = node_count * rd * rs + (vanish_at_ends ? 2 * rd * rs : 0);

  LinearPencil<F> p;
  p.a0 = Matrix<F>(rows, lay.cols);
  p.a1 = Matrix<F>(rows, lay.cols);
  p.blocks = pieces;
  p.block_of_col.resize(lay.cols);
  for (std::size_t j = 0; j < pieces; ++j)
    for (std::size_t b = 0; b < rd; ++b)
      for (std::size_t a = 0; a < rs; ++a)
        if (lay.first_col[j][b][a] >= 0)
          for (long c = 0; c <= lay.degree[j][b][a]; ++c)
            p.block_of_col[static_cast<std::size_t>(lay.first_col[j][b][a] + c)] = j;

  auto lead_col = [&](std::size_t j, std::size_t b, std::size_t a) -> long {
    long f = lay.first_col[j][b][a];
    return f < 0 ? -1 : f + lay.degree[j][b][a];
  };
  auto const_col = [&](std::size_t j, std::size_t b, std::size_t a) -> long { return lay.first_col[j][b][a]; };

  std::size_t row = 0;
  for (std::size_t node = 0; node < node_count; ++node) {
    std::size_t j = node, next = (node + 1) % pieces;
    const auto& gs = src.nodes[node];
    const auto& gd = dst.nodes[node];
    for (std::size_t b = 0; b < rd; ++b)
      for (std::size_t a = 0; a < rs; ++a, ++row) {
        for (std::size_t c = 0; c < rd; ++c) {
          long col = lead_col(j, c, a);
          if (col < 0) continue;
          p.a0(row, static_cast<std::size_t>(col)) += gd.g0(b, c);
          p.a1(row, static_cast<std::size_t>(col)) += gd.g1(b, c);
        }
        for (std::size_t c = 0; c < rs; ++c) {
          long col = const_col(next, b, c);
          if (col < 0) continue;
          p.a0(row, static_cast<std::size_t>(col)) -= gs.g0(c, a);
          p.a1(row, static_cast<std::size_t>(col)) -= gs.g1(c, a);
        }
      }
  }
  if (vanish_at_ends) {
    for (std::size_t b = 0; b < rd; ++b)
      for (std::size_t a = 0; a < rs; ++a, ++row) {
        long col = const_col(0, b, a);
        if (col >= 0) p.a0(row, static_cast<std::size_t>(col)) = F(1);
      }
    for (std::size_t b = 0; b < rd; ++b)
      for (std::size_t a = 0; a < rs; ++a, ++row) {
        long col = lead_col(pieces - 1, b, a);
        if (col >= 0) p.a0(row, static_cast<std::size_t>(col)) = F(1);
      }
  }
  if (layout_out) *layout_out = std::move(lay);
  return p;
}

}  // namespace fmcalc::cyc
