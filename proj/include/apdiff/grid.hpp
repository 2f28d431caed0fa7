// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace apdiff {

struct Bounds {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  bool operator==(const Bounds&) const = default;
};

/// Uniform Cartesian mesh with one ring of ghost nodes and the staggered
/// lattice of cell centers.
///
/// Nodes carry integer indices i in [-1, nx+1], j in [-1, ny+1]; the interior
/// set I is [0, nx] x [0, ny]. Cells are indexed by their lower-left node, so
/// cell (i, j) is centered at (x_{i+1/2}, y_{j+1/2}) with i in [-1, nx],
/// j in [-1, ny]; the interior cell set I* is [0, nx-1] x [0, ny-1].
///
/// The computational domain [x_{-1/2}, x_{nx+1/2}] x [y_{-1/2}, y_{ny+1/2}]
/// coincides with the bounds, so dx = (x_max - x_min) / (nx + 1) and
/// x_i = x_min + (i + 1/2) dx. A square mesh of k x k cells has nx = k - 1.
class Grid {
 public:
  Grid(Bounds bounds, int nx, int ny);

  /// k x k cell mesh over `bounds` (nx = ny = k - 1).
  static Grid square_mesh(Bounds bounds, int k) { return Grid(bounds, k - 1, k - 1); }

  const Bounds& bounds() const { return bounds_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double h() const { return dx_ > dy_ ? dx_ : dy_; }

  // Node coordinates x_i, y_j.
  double x(int i) const { return bounds_.x_min + (i + 0.5) * dx_; }
  double y(int j) const { return bounds_.y_min + (j + 0.5) * dy_; }
  // Cell-center coordinates x_{i+1/2}, y_{j+1/2}.
  double xc(int i) const { return bounds_.x_min + (i + 1) * dx_; }
  double yc(int j) const { return bounds_.y_min + (j + 1) * dy_; }

  // Extended lattice extents (ghosts included).
  int node_cols() const { return nx_ + 3; }
  int node_rows() const { return ny_ + 3; }
  int cell_cols() const { return nx_ + 2; }
  int cell_rows() const { return ny_ + 2; }

  bool is_interior_node(int i, int j) const {
    return i >= 0 && i <= nx_ && j >= 0 && j <= ny_;
  }
  bool is_interior_cell(int i, int j) const {
    return i >= 0 && i < nx_ && j >= 0 && j < ny_;
  }

  std::size_t interior_node_count() const {
    return static_cast<std::size_t>(nx_ + 1) * static_cast<std::size_t>(ny_ + 1);
  }
  std::size_t interior_cell_count() const {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  }

  /// Row-major unknown numbering over I* (x fastest).
  int cell_unknown(int i, int j) const { return j * nx_ + i; }

  bool operator==(const Grid&) const = default;

 private:
  Bounds bounds_;
  int nx_;
  int ny_;
  double dx_;
  double dy_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Dense storage over an extended lattice. Ghost entries start at zero.
template <typename T, bool OnCells>
class LatticeField {
 public:
  LatticeField() = default;
  explicit LatticeField(const Grid& grid, T init = T{})
      : grid_(grid),
        cols_(OnCells ? grid.cell_cols() : grid.node_cols()),
        rows_(OnCells ? grid.cell_rows() : grid.node_rows()),
        values_(static_cast<std::size_t>(cols_) * static_cast<std::size_t>(rows_), init) {}

  const Grid& grid() const { return grid_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }

  // Indices are lattice indices (ghost ring at -1).
  T& operator()(int i, int j) { return values_[offset(i, j)]; }
  const T& operator()(int i, int j) const { return values_[offset(i, j)]; }

  std::vector<T>& data() { return values_; }
  const std::vector<T>& data() const { return values_; }

 private:
  std::size_t offset(int i, int j) const {
    return static_cast<std::size_t>(j + 1) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(i + 1);
  }

  Grid grid_{Bounds{}, 2, 2};
  int cols_ = 0;
  int rows_ = 0;
  std::vector<T> values_;
};

/// Scalars on the node lattice (i, j) in [-1, nx+1] x [-1, ny+1].
using NodeField = LatticeField<double, false>;
/// Scalars on the cell lattice (i, j) in [-1, nx] x [-1, ny].
using CellField = LatticeField<double, true>;
/// 2-vectors on the cell lattice (anisotropy direction b, source S).
using CellVectorField = LatticeField<Vec2, true>;

using ScalarFunction = std::function<double(double, double)>;
using VectorFunction = std::function<Vec2(double, double)>;

class SamplingError : public std::runtime_error {
 public:
  SamplingError(const std::string& what, double x, double y)
      : std::runtime_error(what), x_(x), y_(y) {}
  double x() const { return x_; }
  double y() const { return y_; }

 private:
  double x_;
  double y_;
};

Grid make_grid(const Bounds& bounds, int nx, int ny);

NodeField sample_node(const ScalarFunction& fn, const Grid& grid);
CellField sample_cell(const ScalarFunction& fn, const Grid& grid);
CellVectorField sample_cell_vec(const VectorFunction& fn, const Grid& grid);

/// Sets every ghost entry to `value`.
void set_ghosts(NodeField& field, double value);
void set_ghosts(CellField& field, double value);

/// Copy of `field` with ghost entries zeroed.
CellField restrict_to_interior(const CellField& field);

enum class NormKind { L1, L2, Linf };

/// Discrete norms over I (nodes) or I* (cells); l1 and l2 carry the dx*dy
/// cell measure, so relative quantities are resolution independent.
double interior_norm(const NodeField& field, NormKind kind);
double interior_norm(const CellField& field, NormKind kind);

/// CSV dumps used for plot data: `i,j,x,y,value` and `i,j,xc,yc,value`.
void write_csv(std::ostream& os, const NodeField& field, bool include_ghosts = true);
void write_csv(std::ostream& os, const CellField& field, bool include_ghosts = true);

}  // namespace apdiff
