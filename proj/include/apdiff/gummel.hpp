// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "apdiff/apcore.hpp"

/// Gummel (Newton) iteration for the nonlinear problem
///
///   -div( H (b (x) b) (grad p - S) / eps ) + g(p) = f.
///
/// Each step linearizes g around the current iterate and hands the
/// correction problem to the asymptotic-preserving linear solver.
namespace apdiff::gummel {

using ReactionLaw = std::function<double(double)>;

struct NonlinearProblem {
  double eps = 0.0;
  CellField H;
  CellVectorField b;
  NodeField f;
  CellField bS;
  ReactionLaw g;
  ReactionLaw dg;

  const Grid& grid() const { return b.grid(); }
};

struct LinearizeOptions {
  /// g' values below this floor are replaced by it.
  double derivative_floor = 1e-12;
};

struct Linearization {
  ap::LinearProblem problem;
  /// Number of samples where g' was floored.
  int floored = 0;
};

/// G_N = g'(p_N) at nodes and at 4-node cell averages, f_N = f - g(p_N),
/// b.S_N = b.S - d_h p_N on every cell. p_N must have its ghost ring filled.
Linearization linearize(const NonlinearProblem& problem, const NodeField& p_n,
                        const LinearizeOptions& options = {});

struct IterationRecord {
  int n = 0;
  double correction_rel = 0.0;  // ||delta_N||_{l2(I)} / ||p_{N+1}||_{l2(I)}
  double error_rel_l2 = 0.0;    // vs the exact solution when known, NaN otherwise
  double residual_h = 0.0;
  double residual_L = 0.0;
  double residual_l = 0.0;
  int floored = 0;
  double ghost_defect = 0.0;
  double correction_abs = 0.0;  // ||delta_N||_{l2(I)}, watched by the divergence test
};

enum class Status { Converged, MaxIterations, Diverged };
std::string to_string(Status status);

struct GummelState {
  int n = 0;  // number of completed iterations
  NodeField p;
  std::vector<IterationRecord> history;
};

struct StopCriteria {
  double tol_rel = 1e-12;
  int max_iter = 30;
};

struct GummelOptions {
  StopCriteria stop;
  ap::ApOptions linear;
  LinearizeOptions linearize;
  /// Exact solution on the grid, used only to fill error_rel_l2.
  std::optional<NodeField> exact;
  /// Divergence: ||delta_N|| grows by more than this factor over
  /// `divergence_window` consecutive iterations.
  double divergence_growth = 10.0;
  int divergence_window = 3;
  /// Iterations to keep running after the stopping test passed, to observe
  /// the error plateau. Divergence is only tested above tol_rel.
  int extra_iterations = 0;
};

struct GummelResult {
  NodeField p;  // final iterate, ghost ring filled
  GummelState state;
  Status status = Status::MaxIterations;
  /// Iteration index N of the first correction at or below tol_rel (-1 if none).
  int converged_at = -1;
  std::string message;
};

/// p_{N+1} = p_N + delta_N until ||delta_N|| / ||p_{N+1}|| <= tol_rel or
/// N_max iterations. Ghost values of p0 are used as given. Divergence,
/// non-finite iterates and linear solver failures stop the loop with
/// Status::Diverged; the history up to that point is kept.
GummelResult gummel_solve(const NonlinearProblem& problem, const NodeField& p0,
                          const GummelOptions& options = {});

struct PlateauReport {
  bool reached = false;
  /// First iteration whose correction is at or below the threshold.
  int start = -1;
  double value = 0.0;
  /// Largest relative change of the error after `start`.
  double max_relative_change = 0.0;
};

/// Checks that the error against the exact solution stops changing once the
/// correction reached `correction_threshold` (the remaining error is the
/// discretization error). Requires error_rel_l2 in the history.
PlateauReport error_plateau_check(const std::vector<IterationRecord>& history,
                                  double correction_threshold = 1e-10,
                                  double change_tolerance = 0.01);

/// `N,correction_rel,error_rel_l2,residual_h,residual_L,residual_l`
void write_history_csv(std::ostream& os, const std::vector<IterationRecord>& history);

}  // namespace apdiff::gummel
