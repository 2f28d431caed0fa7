// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "apdiff/apcore.hpp"
#include "apdiff/linsolve.hpp"

/// Direct discretization of the singular problem, kept as a baseline.
namespace apdiff::naive {

struct NaiveSystem {
  Grid grid;
  linsolve::SparseSystem system;
  /// Ghost cells with |b.nu| below the threshold, where the flux row
  /// carries no information and zero flux is imposed instead.
  int degenerate_rows = 0;

  /// Unknown index of interior node (i, j).
  int node_unknown(int i, int j) const { return j * (grid.nx() + 1) + i; }
};

/// Rows on every node of I:
///
///   -d_h*(chi) + eps G p = eps f,   chi = H (d_h p - b.S) on I*,
///
/// with the ghost-cell flux rows H (d_h p - b.S)(b.nu) = 0 imposed exactly
/// as chi = 0 on the ghost cell ring. Ghost node values then drop out of the
/// interior rows, so the unknowns are the nodes of I and the matrix is
/// symmetric. nu is the outward edge normal, (+-1, +-1)/sqrt(2) on corner
/// cells; |b.nu| < degenerate_tol flags a degenerate row.
NaiveSystem assemble_naive(const ap::LinearProblem& problem, double degenerate_tol = 1e-12);

struct NaiveSolution {
  /// Interior solution; the ghost ring is filled so that d_h p = b.S on
  /// ghost cells (diagnostic only).
  NodeField p;
  linsolve::SolveReport report;
};

NaiveSolution solve_naive(const ap::LinearProblem& problem,
                          const linsolve::SolverConfig& config = {});

struct ConditioningRow {
  double eps = 0.0;
  double cond_estimate = 0.0;
  double solve_residual = 0.0;
  /// "ok", or "singular"/"overflow" when the estimate exceeded the
  /// representable range, or "solve-failed".
  std::string status;
};

/// Condition estimates of the naive matrix for each eps (positive,
/// strictly descending) on the given linear case.
std::vector<ConditioningRow> conditioning_sweep(const std::string& case_name,
                                                const std::vector<double>& eps_list,
                                                const Grid& grid,
                                                const linsolve::SolverConfig& config = {});

/// `eps,cond_estimate,solve_residual,status`
void write_conditioning_csv(std::ostream& os, const std::vector<ConditioningRow>& rows);

}  // namespace apdiff::naive
