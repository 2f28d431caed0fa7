// SPDX-License-Identifier: Apache-2.0
#include "apdiff/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace apdiff {

Grid::Grid(Bounds bounds, int nx, int ny) : bounds_(bounds), nx_(nx), ny_(ny) {
  if (!(bounds.x_max > bounds.x_min) || !(bounds.y_max > bounds.y_min)) {
    throw std::invalid_argument("grid bounds must have positive extent");
  }
  if (nx < 2 || ny < 2) {
    throw std::invalid_argument("grid needs nx >= 2 and ny >= 2");
  }
  dx_ = (bounds.x_max - bounds.x_min) / (nx + 1);
  dy_ = (bounds.y_max - bounds.y_min) / (ny + 1);
}

Grid make_grid(const Bounds& bounds, int nx, int ny) { return Grid(bounds, nx, ny); }

namespace {

[[noreturn]] void throw_non_finite(const char* lattice, int i, int j, double x, double y) {
  std::ostringstream msg;
  msg << "non-finite sample on " << lattice << " (" << i << "," << j << ") at (" << x << ","
      << y << ")";
  throw SamplingError(msg.str(), x, y);
}

}  // namespace

NodeField sample_node(const ScalarFunction& fn, const Grid& grid) {
  NodeField out(grid);
  for (int j = -1; j <= grid.ny() + 1; ++j) {
    for (int i = -1; i <= grid.nx() + 1; ++i) {
      const double v = fn(grid.x(i), grid.y(j));
      if (!std::isfinite(v)) throw_non_finite("node", i, j, grid.x(i), grid.y(j));
      out(i, j) = v;
    }
  }
  return out;
}

CellField sample_cell(const ScalarFunction& fn, const Grid& grid) {
  CellField out(grid);
  for (int j = -1; j <= grid.ny(); ++j) {
    for (int i = -1; i <= grid.nx(); ++i) {
      const double v = fn(grid.xc(i), grid.yc(j));
      if (!std::isfinite(v)) throw_non_finite("cell", i, j, grid.xc(i), grid.yc(j));
      out(i, j) = v;
    }
  }
  return out;
}

CellVectorField sample_cell_vec(const VectorFunction& fn, const Grid& grid) {
  CellVectorField out(grid);
  for (int j = -1; j <= grid.ny(); ++j) {
    for (int i = -1; i <= grid.nx(); ++i) {
      const Vec2 v = fn(grid.xc(i), grid.yc(j));
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        throw_non_finite("cell", i, j, grid.xc(i), grid.yc(j));
      }
      out(i, j) = v;
    }
  }
  return out;
}

void set_ghosts(NodeField& field, double value) {
  const Grid& g = field.grid();
  for (int j = -1; j <= g.ny() + 1; ++j) {
    for (int i = -1; i <= g.nx() + 1; ++i) {
      if (!g.is_interior_node(i, j)) field(i, j) = value;
    }
  }
}

void set_ghosts(CellField& field, double value) {
  const Grid& g = field.grid();
  for (int j = -1; j <= g.ny(); ++j) {
    for (int i = -1; i <= g.nx(); ++i) {
      if (!g.is_interior_cell(i, j)) field(i, j) = value;
    }
  }
}

CellField restrict_to_interior(const CellField& field) {
  CellField out = field;
  set_ghosts(out, 0.0);
  return out;
}

namespace {

template <typename Visit>
double accumulate_norm(NormKind kind, double measure, Visit&& visit) {
  double acc = 0.0;
  visit([&](double v) {
    switch (kind) {
      case NormKind::L1: acc += std::abs(v); break;
      case NormKind::L2: acc += v * v; break;
      case NormKind::Linf: acc = std::max(acc, std::abs(v)); break;
    }
  });
  switch (kind) {
    case NormKind::L1: return acc * measure;
    case NormKind::L2: return std::sqrt(acc * measure);
    case NormKind::Linf: return acc;
  }
  return acc;
}

}  // namespace

double interior_norm(const NodeField& field, NormKind kind) {
  const Grid& g = field.grid();
  return accumulate_norm(kind, g.dx() * g.dy(), [&](auto&& add) {
    for (int j = 0; j <= g.ny(); ++j)
      for (int i = 0; i <= g.nx(); ++i) add(field(i, j));
  });
}

double interior_norm(const CellField& field, NormKind kind) {
  const Grid& g = field.grid();
  return accumulate_norm(kind, g.dx() * g.dy(), [&](auto&& add) {
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) add(field(i, j));
  });
}

void write_csv(std::ostream& os, const NodeField& field, bool include_ghosts) {
  const Grid& g = field.grid();
  const auto old_precision = os.precision(17);
  os << "i,j,x,y,value\n";
  for (int j = -1; j <= g.ny() + 1; ++j) {
    for (int i = -1; i <= g.nx() + 1; ++i) {
      if (!include_ghosts && !g.is_interior_node(i, j)) continue;
      os << i << ',' << j << ',' << g.x(i) << ',' << g.y(j) << ',' << field(i, j) << '\n';
    }
  }
  os.precision(old_precision);
}

void write_csv(std::ostream& os, const CellField& field, bool include_ghosts) {
  const Grid& g = field.grid();
  const auto old_precision = os.precision(17);
  os << "i,j,xc,yc,value\n";
  for (int j = -1; j <= g.ny(); ++j) {
    for (int i = -1; i <= g.nx(); ++i) {
      if (!include_ghosts && !g.is_interior_cell(i, j)) continue;
      os << i << ',' << j << ',' << g.xc(i) << ',' << g.yc(j) << ',' << field(i, j) << '\n';
    }
  }
  os.precision(old_precision);
}

}  // namespace apdiff
