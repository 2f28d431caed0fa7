// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>

#include "apdiff/operators.hpp"

namespace apdiff::ops::reference {

namespace {
constexpr int kCornerDi[4] = {0, 1, 0, 1};
constexpr int kCornerDj[4] = {0, 0, 1, 1};
}  // namespace

CellField apply_dh(const NodeField& theta, const OperatorContext& ctx) {
  const Grid& g = ctx.grid();
  CellField out(g);
  for (int j = -1; j <= g.ny(); ++j) {
    for (int i = -1; i <= g.nx(); ++i) {
      const auto w = dh_weights(ctx.b()(i, j), g.dx(), g.dy());
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += w[k] * theta(i + kCornerDi[k], j + kCornerDj[k]);
      out(i, j) = acc;
    }
  }
  return out;
}

NodeField apply_dh_star(const CellField& chi, const OperatorContext& ctx) {
  const Grid& g = ctx.grid();
  NodeField out(g);
  for (int j = -1; j <= g.ny(); ++j) {
    for (int i = -1; i <= g.nx(); ++i) {
      const auto w = dh_weights(ctx.b()(i, j), g.dx(), g.dy());
      for (int k = 0; k < 4; ++k) {
        const int ni = i + kCornerDi[k];
        const int nj = j + kCornerDj[k];
        if (g.is_interior_node(ni, nj)) out(ni, nj) -= w[k] * chi(i, j);
      }
    }
  }
  return out;
}

CellField compose_second_order(const CellField& chi, const CellField& cell_w,
                               const NodeField& node_w, const OperatorContext& ctx) {
  const Grid& g = ctx.grid();
  CellField weighted(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) weighted(i, j) = cell_w(i, j) * chi(i, j);
  NodeField flux = reference::apply_dh_star(weighted, ctx);
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) {
      if (!(node_w(i, j) > 0.0)) {
        throw std::domain_error("compose_second_order: node weight must be positive");
      }
      flux(i, j) *= node_w(i, j);
    }
  }
  CellField grad = reference::apply_dh(flux, ctx);
  CellField out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out(i, j) = -grad(i, j);
  return out;
}

}  // namespace apdiff::ops::reference
