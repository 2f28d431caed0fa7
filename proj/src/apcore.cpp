// SPDX-License-Identifier: Apache-2.0
#include "apdiff/apcore.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace apdiff::ap {

using linsolve::LinearSolver;
using linsolve::SolverConfig;
using ops::OperatorContext;

void LinearProblem::validate() const {
  const Grid& g = grid();
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be >= 0");
  if (!(G_node.grid() == g && G_cell.grid() == g && H.grid() == g && f.grid() == g &&
        bS.grid() == g)) {
    throw std::invalid_argument("linear problem fields live on different grids");
  }
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) {
      if (!(G_node(i, j) > 0.0)) throw std::invalid_argument("G must be positive on I");
      if (!std::isfinite(f(i, j))) throw std::invalid_argument("f must be finite on I");
    }
  }
  for (int j = -1; j <= g.ny(); ++j) {
    for (int i = -1; i <= g.nx(); ++i) {
      if (!(G_cell(i, j) > 0.0)) throw std::invalid_argument("G must be positive at cells");
      if (!(H(i, j) > 0.0)) throw std::invalid_argument("H must be positive at cells");
      if (!std::isfinite(bS(i, j))) throw std::invalid_argument("b.S must be finite");
    }
  }
}

namespace {

NodeField reciprocal_on_interior(const NodeField& w) {
  const Grid& g = w.grid();
  NodeField out(g);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) out(i, j) = 1.0 / w(i, j);
  return out;
}

NodeField ratio_on_interior(const NodeField& num, const NodeField& den) {
  const Grid& g = num.grid();
  NodeField out(g);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) out(i, j) = num(i, j) / den(i, j);
  return out;
}

/// Assembled and factorized -d_h((1/G) d_h*(W .)) + shift.
class EllipticSystem {
 public:
  EllipticSystem(const OperatorContext& ctx, const CellField& cell_w, const NodeField& inv_g,
                 double shift, const SolverConfig& config, const std::string& stage)
      : grid_(ctx.grid()), stage_(stage), solver_(build(ctx, cell_w, inv_g, shift, stage), config) {}

  // `stage` overrides the label when the factorization is shared.
  CellField solve(const CellField& rhs, StageDiagnostics* diag,
                  const std::string& stage = {}) const {
    const linsolve::SolveReport report = solver_.solve(linsolve::to_vector(rhs));
    linsolve::require_converged(report, stage.empty() ? stage_ : stage);
    if (diag != nullptr) {
      diag->residual = report.relative_residual;
      diag->iterations = report.iterations;
      diag->seconds += report.wall_seconds;
    }
    return linsolve::to_cell_field(report.solution, grid_);
  }

 private:
  static linsolve::SparseMatrix build(const OperatorContext& ctx, const CellField& cell_w,
                                      const NodeField& inv_g, double shift,
                                      const std::string& stage) {
    try {
      return linsolve::assemble(
          [&](const CellField& chi) {
            CellField out = ops::compose_second_order(chi, cell_w, inv_g, ctx);
            if (shift != 0.0) {
              const Grid& g = ctx.grid();
              for (int j = 0; j < g.ny(); ++j)
                for (int i = 0; i < g.nx(); ++i) out(i, j) += shift * chi(i, j);
            }
            return out;
          },
          ctx.grid());
    } catch (const linsolve::AssemblyError& e) {
      throw linsolve::SolverError(stage, e.what(), std::numeric_limits<double>::infinity());
    }
  }

  Grid grid_;
  std::string stage_;
  LinearSolver solver_;
};

CellField h_rhs(const LinearProblem& p, const OperatorContext& ctx) {
  return ops::apply_dh_interior(ratio_on_interior(p.f, p.G_node), ctx);
}

CellField L_rhs(const LinearProblem& p, const OperatorContext& ctx) {
  CellField rhs = h_rhs(p, ctx);
  const Grid& g = p.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) rhs(i, j) = -p.eps * (rhs(i, j) - p.bS(i, j));
  return rhs;
}

CellField l_rhs(const LinearProblem& p, const CellField& L) {
  const Grid& g = p.grid();
  CellField rhs(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) rhs(i, j) = L(i, j) - p.bS(i, j);
  return rhs;
}

EllipticSystem g_system(const LinearProblem& p, const OperatorContext& ctx,
                        const SolverConfig& config, const std::string& stage) {
  return EllipticSystem(ctx, p.G_cell, reciprocal_on_interior(p.G_node), 0.0, config, stage);
}

NodeField weighted_divergence_over_g(const LinearProblem& p, const CellField& chi,
                                     const OperatorContext& ctx) {
  const Grid& g = p.grid();
  CellField weighted(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) weighted(i, j) = p.G_cell(i, j) * chi(i, j);
  NodeField out = ops::apply_dh_star(weighted, ctx);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) out(i, j) /= p.G_node(i, j);
  return out;
}

}  // namespace

CellField solve_h(const LinearProblem& problem, const SolverConfig& config,
                  StageDiagnostics* diag) {
  problem.validate();
  const OperatorContext ctx(problem.b);
  return g_system(problem, ctx, config, "h").solve(h_rhs(problem, ctx), diag);
}

NodeField reconstruct_pi(const LinearProblem& problem, const CellField& h) {
  const OperatorContext ctx(problem.b);
  const Grid& g = problem.grid();
  CellField weighted(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) weighted(i, j) = problem.G_cell(i, j) * h(i, j);
  const NodeField div = ops::apply_dh_star(weighted, ctx);
  NodeField pi(g);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      pi(i, j) = (problem.f(i, j) + div(i, j)) / problem.G_node(i, j);
  return pi;
}

CellField solve_L(const LinearProblem& problem, const SolverConfig& config,
                  StageDiagnostics* diag) {
  problem.validate();
  if (problem.eps == 0.0) return CellField(problem.grid());
  const OperatorContext ctx(problem.b);
  const EllipticSystem sys(ctx, problem.H, reciprocal_on_interior(problem.G_node), problem.eps,
                           config, "L");
  return sys.solve(L_rhs(problem, ctx), diag);
}

CellField solve_l(const LinearProblem& problem, const CellField& L, const SolverConfig& config,
                  StageDiagnostics* diag) {
  problem.validate();
  const OperatorContext ctx(problem.b);
  return g_system(problem, ctx, config, "l").solve(l_rhs(problem, L), diag);
}

NodeField reconstruct_q(const LinearProblem& problem, const CellField& l) {
  const OperatorContext ctx(problem.b);
  return weighted_divergence_over_g(problem, l, ctx);
}

GhostFillResult fill_ghost(const NodeField& p, const CellVectorField& b, const CellField& bS,
                           double defect_threshold) {
  const Grid& g = p.grid();
  const int nx = g.nx();
  const int ny = g.ny();

  // Ghost node numbering.
  std::vector<std::pair<int, int>> ghosts;
  NodeField index(g, -1.0);
  for (int j = -1; j <= ny + 1; ++j) {
    for (int i = -1; i <= nx + 1; ++i) {
      if (g.is_interior_node(i, j)) continue;
      index(i, j) = static_cast<double>(ghosts.size());
      ghosts.emplace_back(i, j);
    }
  }
  const auto n_ghost = static_cast<Eigen::Index>(ghosts.size());

  // Linear extrapolation from the interior (diagonal at corners).
  GhostFillResult result{p, {}};
  NodeField& out = result.p;
  auto clamp_x = [&](int i) { return i < 0 ? 0 : (i > nx ? nx : i); };
  auto clamp_y = [&](int j) { return j < 0 ? 0 : (j > ny ? ny : j); };
  Eigen::VectorXd extrap(n_ghost);
  for (Eigen::Index k = 0; k < n_ghost; ++k) {
    const auto [i, j] = ghosts[static_cast<std::size_t>(k)];
    const int ii = clamp_x(i);
    const int jj = clamp_y(j);
    const int si = i - ii;  // outward step, -1, 0 or +1
    const int sj = j - jj;
    extrap[k] = 2.0 * p(ii, jj) - p(ii - si, jj - sj);
  }

  // Constraint rows, one per ghost cell.
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> rhs;
  constexpr int kDi[4] = {0, 1, 0, 1};
  constexpr int kDj[4] = {0, 0, 1, 1};
  for (int j = -1; j <= ny; ++j) {
    for (int i = -1; i <= nx; ++i) {
      if (g.is_interior_cell(i, j)) continue;
      const auto w = ops::dh_weights(b(i, j), g.dx(), g.dy());
      const auto row = static_cast<int>(rhs.size());
      double known = 0.0;
      for (int k = 0; k < 4; ++k) {
        const int ni = i + kDi[k];
        const int nj = j + kDj[k];
        if (g.is_interior_node(ni, nj)) {
          known += w[k] * p(ni, nj);
        } else {
          triplets.emplace_back(row, static_cast<int>(index(ni, nj)), w[k]);
        }
      }
      rhs.push_back(bS(i, j) - known);
    }
  }
  const auto n_rows = static_cast<Eigen::Index>(rhs.size());
  linsolve::SparseMatrix c(n_rows, n_ghost);
  c.setFromTriplets(triplets.begin(), triplets.end());
  const Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n_rows);

  // Minimum-norm correction: delta = C^T (C C^T)^{-1} (r - C extrap).
  const Eigen::VectorXd target = r - c * extrap;
  linsolve::SparseMatrix normal = c * linsolve::SparseMatrix(c.transpose());
  Eigen::SimplicialLDLT<linsolve::SparseMatrix> ldlt(normal);
  bool deficient = ldlt.info() != Eigen::Success;
  if (!deficient) {
    const Eigen::VectorXd d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    deficient = !(d.minCoeff() > 1e-13 * dmax);
  }
  if (deficient) {
    double diag_max = 0.0;
    for (Eigen::Index k = 0; k < n_rows; ++k) diag_max = std::max(diag_max, normal.coeff(k, k));
    linsolve::SparseMatrix shifted = normal;
    for (Eigen::Index k = 0; k < n_rows; ++k) shifted.coeffRef(k, k) += 1e-12 * diag_max;
    ldlt.compute(shifted);
  }
  const Eigen::VectorXd y = ldlt.solve(target);
  const Eigen::VectorXd values = extrap + c.transpose() * y;

  for (Eigen::Index k = 0; k < n_ghost; ++k) {
    const auto [i, j] = ghosts[static_cast<std::size_t>(k)];
    out(i, j) = values[k];
  }
  result.report.defect = (c * values - r).lpNorm<Eigen::Infinity>();
  result.report.rank_deficient = deficient;
  result.report.defect_exceeded =
      !(result.report.defect <= defect_threshold * std::max(1.0, r.lpNorm<Eigen::Infinity>()));
  return result;
}

GhostFillResult fill_ghost(const NodeField& p, const LinearProblem& problem,
                           double defect_threshold) {
  return fill_ghost(p, problem.b, problem.bS, defect_threshold);
}

SolutionDecomposition solve_linear_ap(const LinearProblem& problem, const ApOptions& options) {
  problem.validate();
  const Grid& g = problem.grid();
  const OperatorContext ctx(problem.b);

  SolutionDecomposition out{
      CellField(g), CellField(g), CellField(g), NodeField(g), NodeField(g), NodeField(g),
      {},           {},           {},           0.0,          0.0,          {}};

  const EllipticSystem g_sys = g_system(problem, ctx, options.solver, "h");
  out.h = g_sys.solve(h_rhs(problem, ctx), &out.h_solve);
  out.pi = reconstruct_pi(problem, out.h);

  if (problem.eps != 0.0) {
    const EllipticSystem l_sys(ctx, problem.H, reciprocal_on_interior(problem.G_node),
                               problem.eps, options.solver, "L");
    out.L = l_sys.solve(L_rhs(problem, ctx), &out.L_solve);
  }

  out.l = g_sys.solve(l_rhs(problem, out.L), &out.l_solve, "l");
  out.q = weighted_divergence_over_g(problem, out.l, ctx);

  NodeField p(g);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) p(i, j) = out.pi(i, j) + out.q(i, j);

  const CellField dh_pi = ops::apply_dh_interior(out.pi, ctx);
  out.dh_pi_l2 = interior_norm(dh_pi, NormKind::L2);
  out.dh_pi_linf = interior_norm(dh_pi, NormKind::Linf);

  GhostFillResult filled = fill_ghost(p, problem, options.ghost_defect_threshold);
  out.p = std::move(filled.p);
  out.ghost = filled.report;
  return out;
}

}  // namespace apdiff::ap
