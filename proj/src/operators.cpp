// SPDX-License-Identifier: Apache-2.0
#include "apdiff/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace apdiff::ops {

OperatorContext::OperatorContext(CellVectorField b) : b_(std::move(b)) {
  for (const Vec2& v : b_.data()) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || (v.x == 0.0 && v.y == 0.0)) {
      throw std::invalid_argument("anisotropy direction must be finite and nonzero");
    }
  }
}

std::array<double, 4> dh_weights(Vec2 b, double dx, double dy) {
  const double ax = b.x / (2.0 * dx);
  const double ay = b.y / (2.0 * dy);
  return {-ax - ay, ax - ay, -ax + ay, ax + ay};
}

namespace {

// Averaged differences of the four corner nodes of cell (i, j), x-pair first.
inline double dh_at(const NodeField& t, const CellVectorField& b, int i, int j, double inv2dx,
                    double inv2dy) {
  const double ddx = (t(i + 1, j + 1) - t(i, j + 1) + t(i + 1, j) - t(i, j)) * inv2dx;
  const double ddy = (t(i + 1, j + 1) - t(i + 1, j) + t(i, j + 1) - t(i, j)) * inv2dy;
  const Vec2 bc = b(i, j);
  return bc.x * ddx + bc.y * ddy;
}

inline double dh_star_at(const CellField& c, const CellVectorField& b, int i, int j,
                         double inv2dx, double inv2dy) {
  const double fx = b(i, j).x * c(i, j) - b(i - 1, j).x * c(i - 1, j) +
                    b(i, j - 1).x * c(i, j - 1) - b(i - 1, j - 1).x * c(i - 1, j - 1);
  const double fy = b(i, j).y * c(i, j) - b(i, j - 1).y * c(i, j - 1) +
                    b(i - 1, j).y * c(i - 1, j) - b(i - 1, j - 1).y * c(i - 1, j - 1);
  return fx * inv2dx + fy * inv2dy;
}

}  // namespace

CellField apply_dh(const NodeField& theta, const OperatorContext& ctx) {
  const Grid& g = ctx.grid();
  const CellVectorField& b = ctx.b();
  const double inv2dx = 1.0 / (2.0 * g.dx());
  const double inv2dy = 1.0 / (2.0 * g.dy());
  CellField out(g);
  const int nx = g.nx();
  const int ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int j = -1; j <= ny; ++j) {
    for (int i = -1; i <= nx; ++i) out(i, j) = dh_at(theta, b, i, j, inv2dx, inv2dy);
  }
  return out;
}

CellField apply_dh_interior(const NodeField& theta, const OperatorContext& ctx) {
  const Grid& g = ctx.grid();
  const CellVectorField& b = ctx.b();
  const double inv2dx = 1.0 / (2.0 * g.dx());
  const double inv2dy = 1.0 / (2.0 * g.dy());
  CellField out(g);
  const int nx = g.nx();
  const int ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) out(i, j) = dh_at(theta, b, i, j, inv2dx, inv2dy);
  }
  return out;
}

NodeField apply_dh_star(const CellField& chi, const OperatorContext& ctx) {
  const Grid& g = ctx.grid();
  const CellVectorField& b = ctx.b();
  const double inv2dx = 1.0 / (2.0 * g.dx());
  const double inv2dy = 1.0 / (2.0 * g.dy());
  NodeField out(g);
  const int nx = g.nx();
  const int ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) out(i, j) = dh_star_at(chi, b, i, j, inv2dx, inv2dy);
  }
  return out;
}

CellField compose_second_order(const CellField& chi, const CellField& cell_w,
                               const NodeField& node_w, const OperatorContext& ctx) {
  const Grid& g = ctx.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      if (!(node_w(i, j) > 0.0)) {
        throw std::domain_error("compose_second_order: node weight must be positive");
      }
    }
  }

  CellField weighted(g);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) weighted(i, j) = cell_w(i, j) * chi(i, j);
  }

  NodeField flux = apply_dh_star(weighted, ctx);
#pragma omp parallel for schedule(static)
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) flux(i, j) *= node_w(i, j);
  }

  CellField out = apply_dh_interior(flux, ctx);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) out(i, j) = -out(i, j);
  }
  return out;
}

double duality_defect(const NodeField& theta, const CellField& chi, const OperatorContext& ctx) {
  const Grid& g = ctx.grid();
  for (int j = -1; j <= g.ny(); ++j) {
    for (int i = -1; i <= g.nx(); ++i) {
      if (!g.is_interior_cell(i, j) && chi(i, j) != 0.0) {
        throw std::invalid_argument("duality_defect: chi must vanish on the ghost ring");
      }
    }
  }
  const CellField grad = apply_dh(theta, ctx);
  const NodeField div = apply_dh_star(chi, ctx);
  double cells = 0.0;
  for (int j = -1; j <= g.ny(); ++j)
    for (int i = -1; i <= g.nx(); ++i) cells += grad(i, j) * chi(i, j);
  double nodes = 0.0;
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) nodes += theta(i, j) * div(i, j);
  return (cells + nodes) * g.dx() * g.dy();
}

}  // namespace apdiff::ops
