// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "apdiff/grid.hpp"
#include "apdiff/linsolve.hpp"
#include "apdiff/operators.hpp"

/// Asymptotic-preserving solver for the linear anisotropic problem
///
///   -div( H (b (x) b) (grad p - S) ) + eps G p = eps f   in the domain,
///   H (grad p - S).b (b.nu) = 0                          on the boundary,
///
/// through the decomposition p = pi + q with d_h pi = 0. Three cell-centered
/// elliptic problems (for h, L, l) replace the singular one; none of them
/// degenerates at eps = 0.
namespace apdiff::ap {

struct LinearProblem {
  double eps = 0.0;
  NodeField G_node;    // reaction coefficient at nodes (used on I)
  CellField G_cell;    // reaction coefficient at cell centers
  CellField H;         // diffusivity at cell centers
  CellVectorField b;   // anisotropy direction at cell centers
  NodeField f;         // source at nodes (used on I)
  CellField bS;        // b . S at cell centers

  const Grid& grid() const { return b.grid(); }

  /// Throws std::invalid_argument on eps < 0, non-positive G or H, zero b
  /// or fields sampled on a different grid.
  void validate() const;
};

struct StageDiagnostics {
  double residual = 0.0;
  int iterations = 0;
  double seconds = 0.0;
};

struct GhostFillReport {
  /// max |d_h p - b.S| over the ghost cell ring after filling.
  double defect = 0.0;
  bool rank_deficient = false;
  bool defect_exceeded = false;
};

struct GhostFillResult {
  NodeField p;
  GhostFillReport report;
};

struct SolutionDecomposition {
  CellField h, L, l;  // zero on the ghost ring
  NodeField pi, q;    // interior nodes
  NodeField p;        // pi + q on I, ghost ring filled
  StageDiagnostics h_solve, L_solve, l_solve;
  double dh_pi_l2 = 0.0;    // ||d_h pi||_{l2(I*)}
  double dh_pi_linf = 0.0;  // ||d_h pi||_{linf(I*)}
  GhostFillReport ghost;
};

struct ApOptions {
  linsolve::SolverConfig solver;
  double ghost_defect_threshold = 1e-8;
};

/// -d_h((1/G) d_h*(G h)) = d_h(f/G) on I*, h = 0 on the ghost ring.
CellField solve_h(const LinearProblem& problem, const linsolve::SolverConfig& config = {},
                  StageDiagnostics* diag = nullptr);

/// pi = (f + d_h*(G h)) / G on I.
NodeField reconstruct_pi(const LinearProblem& problem, const CellField& h);

/// -d_h((1/G) d_h*(H L)) + eps L = -eps (d_h(f/G) - b.S) on I*, L = 0 on the
/// ghost ring. Returns zero without solving when eps = 0.
CellField solve_L(const LinearProblem& problem, const linsolve::SolverConfig& config = {},
                  StageDiagnostics* diag = nullptr);

/// -d_h((1/G) d_h*(G l)) = L - b.S on I*, l = 0 on the ghost ring.
CellField solve_l(const LinearProblem& problem, const CellField& L,
                  const linsolve::SolverConfig& config = {}, StageDiagnostics* diag = nullptr);

/// q = d_h*(G l) / G on I.
NodeField reconstruct_q(const LinearProblem& problem, const CellField& l);

/// Fills the ghost node ring so that d_h p = b.S on every ghost cell.
///
/// The ring has four more ghost nodes than ghost cells, so the constraints
/// are solved for the minimum-norm deviation from the linear extrapolation of
/// the interior values (affine data is reproduced exactly). Interior values
/// are copied unchanged.
GhostFillResult fill_ghost(const NodeField& p, const CellVectorField& b, const CellField& bS,
                           double defect_threshold = 1e-8);
GhostFillResult fill_ghost(const NodeField& p, const LinearProblem& problem,
                           double defect_threshold = 1e-8);

/// Full pipeline: h -> pi -> L -> l -> q, p = pi + q, ghost fill. The h and
/// l systems share one assembled operator and factorization. SolverError
/// exceptions carry the failing stage ("h", "L" or "l").
SolutionDecomposition solve_linear_ap(const LinearProblem& problem, const ApOptions& options = {});

}  // namespace apdiff::ap
