// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>

#include "apdiff/grid.hpp"

namespace apdiff::linsolve {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Cell-centered linear system over I*, unknowns numbered row-major
/// (Grid::cell_unknown).
struct SparseSystem {
  SparseMatrix matrix;
  Vector rhs;

  Eigen::Index size() const { return matrix.rows(); }
};

enum class SolverKind { Direct, Iterative };

struct SolverConfig {
  SolverKind kind = SolverKind::Direct;
  double tol = 1e-12;
  /// Krylov iterations for the iterative path; refinement sweeps for the direct one.
  int max_iter = 1000;
  int restart = 60;
};

SolverKind parse_solver_kind(const std::string& name);
std::string to_string(SolverKind kind);

struct SolveReport {
  Vector solution;
  /// ||A x - b||_2 / max(||b||_2, tiny), recomputed after solving.
  double relative_residual = 0.0;
  /// Krylov iterations, or refinement sweeps for the direct path.
  int iterations = 0;
  double wall_seconds = 0.0;
  bool converged = false;
  std::string message;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& stage, const std::string& what, double best_residual)
      : std::runtime_error(stage + ": " + what), stage_(stage), best_residual_(best_residual) {}
  const std::string& stage() const { return stage_; }
  double best_residual() const { return best_residual_; }

 private:
  std::string stage_;
  double best_residual_;
};

class AssemblyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Interior-cell values <-> unknown vector.
Vector to_vector(const CellField& field);
CellField to_cell_field(const Vector& values, const Grid& grid);

using CellOperator = std::function<CellField(const CellField&)>;

/// Builds the matrix of a linear operator with a 3x3 cell stencil by probing
/// it with the nine colour classes of a 3x3 colouring of I*. The full 9-point
/// pattern is stored (explicit zeros included), so the pattern is symmetric.
/// The result is checked against the operator on a pseudo-random vector and
/// on zero; a mismatch throws AssemblyError.
SparseMatrix assemble(const CellOperator& op, const Grid& grid);

/// Factorizes once and solves many right-hand sides. Solves are const and
/// may run concurrently.
class LinearSolver {
 public:
  LinearSolver(SparseMatrix matrix, SolverConfig config);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  SolveReport solve(const Vector& rhs) const;
  /// Solves A^T x = rhs (direct path only).
  SolveReport solve_transpose(const Vector& rhs) const;

  const SparseMatrix& matrix() const { return matrix_; }
  const SolverConfig& config() const { return config_; }

 private:
  struct Impl;
  SparseMatrix matrix_;
  SolverConfig config_;
  std::unique_ptr<Impl> impl_;
};

/// One-shot solve. Never throws on non-convergence; check `converged`.
SolveReport solve(const SparseSystem& system, const SolverConfig& config);
SolveReport solve(const SparseSystem& system, double tol, int max_iter);

/// Throws SolverError tagged with `stage` when the report did not converge.
void require_converged(const SolveReport& report, const std::string& stage);

struct ConditionEstimate {
  double value = 0.0;  // sigma_max / sigma_min; +inf when the matrix is numerically singular
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  int iterations = 0;
  std::string status;  // "ok", "singular", "overflow"
};

/// 2-norm condition estimate from power iteration on A^T A and on
/// (A^T A)^{-1}, the latter through LU solves with A and A^T.
ConditionEstimate estimate_condition(const SparseMatrix& matrix, int max_iter = 300,
                                     double rel_change = 1e-10);

/// Debug dump in coordinate text format, one `row col value` line per entry.
void write_coordinate(std::ostream& os, const SparseMatrix& matrix);

}  // namespace apdiff::linsolve
