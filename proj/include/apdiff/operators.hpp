// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "apdiff/grid.hpp"

/// Dual discrete operators: the directional gradient d_h (nodes -> cells),
/// approximating b . grad, and the weighted divergence d_h* (cells -> nodes),
/// approximating div(b .). They satisfy the summation-by-parts identity
///
///   sum_{cells} (d_h theta) chi + sum_{nodes in I} theta (d_h* chi) = 0
///
/// for every chi vanishing on the ghost cell ring.
namespace apdiff::ops {

/// Anisotropy direction sampled at cell centers. Vectors must be nonzero.
class OperatorContext {
 public:
  explicit OperatorContext(CellVectorField b);

  const Grid& grid() const { return b_.grid(); }
  const CellVectorField& b() const { return b_; }

 private:
  CellVectorField b_;
};

/// Coefficients of d_h at one cell on its corner nodes, ordered
/// (i,j), (i+1,j), (i,j+1), (i+1,j+1). The coefficient of d_h* from that
/// cell onto corner node k is the negative of entry k.
std::array<double, 4> dh_weights(Vec2 b, double dx, double dy);

/// d_h on every cell of the extended lattice; reads ghost nodes.
CellField apply_dh(const NodeField& theta, const OperatorContext& ctx);

/// d_h on interior cells only (ghost cells of the result are zero); reads
/// interior nodes only.
CellField apply_dh_interior(const NodeField& theta, const OperatorContext& ctx);

/// d_h* on interior nodes; ghost nodes of the result are zero. Reads every
/// cell including the ghost ring.
NodeField apply_dh_star(const CellField& chi, const OperatorContext& ctx);

/// -d_h( node_w * d_h*( cell_w * chi ) ) on interior cells, with the product
/// cell_w * chi taken as zero on the ghost ring. Throws std::domain_error if
/// node_w is not strictly positive on I.
CellField compose_second_order(const CellField& chi, const CellField& cell_w,
                               const NodeField& node_w, const OperatorContext& ctx);

/// Summation-by-parts residual (dx*dy weighted). chi must vanish on the ghost
/// ring (std::invalid_argument otherwise).
double duality_defect(const NodeField& theta, const CellField& chi, const OperatorContext& ctx);

/// Serial scatter-form kernels. They compute the same quantities as the
/// parallel gather kernels above through a different loop structure and are
/// kept for cross-checking and benchmarking.
namespace reference {

CellField apply_dh(const NodeField& theta, const OperatorContext& ctx);
NodeField apply_dh_star(const CellField& chi, const OperatorContext& ctx);
CellField compose_second_order(const CellField& chi, const CellField& cell_w,
                               const NodeField& node_w, const OperatorContext& ctx);

}  // namespace reference

}  // namespace apdiff::ops
