// SPDX-License-Identifier: Apache-2.0
#include "apdiff/gummel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace apdiff::gummel {

std::string to_string(Status status) {
  switch (status) {
    case Status::Converged: return "converged";
    case Status::MaxIterations: return "max-iterations";
    case Status::Diverged: return "diverged";
  }
  return "unknown";
}

Linearization linearize(const NonlinearProblem& problem, const NodeField& p_n,
                        const LinearizeOptions& options) {
  const Grid& g = problem.grid();
  const ops::OperatorContext ctx(problem.b);
  Linearization out{ap::LinearProblem{problem.eps, NodeField(g), CellField(g), problem.H,
                                      problem.b, NodeField(g), CellField(g)},
                    0};
  ap::LinearProblem& lin = out.problem;

  auto floored = [&](double v) {
    if (!(v >= options.derivative_floor)) {
      ++out.floored;
      return options.derivative_floor;
    }
    return v;
  };

  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) {
      const double p = p_n(i, j);
      lin.f(i, j) = problem.f(i, j) - problem.g(p);
      lin.G_node(i, j) = floored(problem.dg(p));
    }
  }
  const CellField dh_p = ops::apply_dh(p_n, ctx);
  for (int j = -1; j <= g.ny(); ++j) {
    for (int i = -1; i <= g.nx(); ++i) {
      const double avg =
          0.25 * (p_n(i + 1, j + 1) + p_n(i + 1, j) + p_n(i, j + 1) + p_n(i, j));
      lin.G_cell(i, j) = floored(problem.dg(avg));
      lin.bS(i, j) = problem.bS(i, j) - dh_p(i, j);
    }
  }
  return out;
}

GummelResult gummel_solve(const NonlinearProblem& problem, const NodeField& p0,
                          const GummelOptions& options) {
  if (!(options.stop.tol_rel > 0.0) || options.stop.max_iter < 1) {
    throw std::invalid_argument("gummel_solve: need tol_rel > 0 and max_iter >= 1");
  }
  const Grid& g = problem.grid();
  for (int j = -1; j <= g.ny() + 1; ++j)
    for (int i = -1; i <= g.nx() + 1; ++i)
      if (!std::isfinite(p0(i, j))) throw std::invalid_argument("gummel_solve: p0 not finite");

  GummelResult result{p0, GummelState{0, p0, {}}, Status::MaxIterations, -1, {}};
  NodeField& p = result.p;
  const double exact_norm =
      options.exact ? interior_norm(*options.exact, NormKind::L2) : 0.0;

  const int n_end = options.stop.max_iter + std::max(0, options.extra_iterations);
  for (int n = 0; n < n_end; ++n) {
    if (result.converged_at < 0 && n >= options.stop.max_iter) break;
    IterationRecord rec;
    rec.n = n;
    ap::SolutionDecomposition step;
    try {
      const Linearization lin = linearize(problem, p, options.linearize);
      rec.floored = lin.floored;
      step = ap::solve_linear_ap(lin.problem, options.linear);
    } catch (const linsolve::SolverError& e) {
      result.status = Status::Diverged;
      result.message = std::string("linear solve failed at iteration ") + std::to_string(n) +
                       ": " + e.what();
      break;
    } catch (const std::invalid_argument& e) {
      result.status = Status::Diverged;
      result.message = std::string("invalid linearized problem at iteration ") +
                       std::to_string(n) + ": " + e.what();
      break;
    }

    NodeField next(g);
    double delta_sq = 0.0;
    bool finite = true;
    for (int j = 0; j <= g.ny(); ++j) {
      for (int i = 0; i <= g.nx(); ++i) {
        const double delta = step.p(i, j);
        next(i, j) = p(i, j) + delta;
        delta_sq += delta * delta;
        finite = finite && std::isfinite(next(i, j));
      }
    }
    if (!finite) {
      result.status = Status::Diverged;
      result.message = "non-finite iterate at iteration " + std::to_string(n);
      break;
    }
    ap::GhostFillResult filled = ap::fill_ghost(next, problem.b, problem.bS,
                                                options.linear.ghost_defect_threshold);
    p = std::move(filled.p);

    const double measure = g.dx() * g.dy();
    rec.correction_abs = std::sqrt(delta_sq * measure);
    rec.correction_rel = rec.correction_abs / interior_norm(p, NormKind::L2);
    rec.residual_h = step.h_solve.residual;
    rec.residual_L = step.L_solve.residual;
    rec.residual_l = step.l_solve.residual;
    rec.ghost_defect = filled.report.defect;
    if (options.exact) {
      double diff_sq = 0.0;
      for (int j = 0; j <= g.ny(); ++j) {
        for (int i = 0; i <= g.nx(); ++i) {
          const double d = p(i, j) - (*options.exact)(i, j);
          diff_sq += d * d;
        }
      }
      rec.error_rel_l2 = std::sqrt(diff_sq * measure) / exact_norm;
    } else {
      rec.error_rel_l2 = std::numeric_limits<double>::quiet_NaN();
    }
    result.state.history.push_back(rec);
    result.state.n = n + 1;

    if (!std::isfinite(rec.correction_rel)) {
      result.status = Status::Diverged;
      result.message = "non-finite correction norm";
      break;
    }
    if (result.converged_at >= 0) {
      if (n - result.converged_at >= options.extra_iterations) break;
      continue;
    }
    if (rec.correction_rel <= options.stop.tol_rel) {
      result.status = Status::Converged;
      result.converged_at = n;
      if (options.extra_iterations <= 0) break;
      continue;
    }
    const auto& hist = result.state.history;
    const int w = options.divergence_window;
    if (static_cast<int>(hist.size()) > w) {
      const double before = hist[hist.size() - 1 - static_cast<std::size_t>(w)].correction_abs;
      bool growing = true;
      for (std::size_t k = hist.size() - static_cast<std::size_t>(w); k < hist.size(); ++k) {
        growing = growing && hist[k].correction_abs > hist[k - 1].correction_abs;
      }
      if (growing && rec.correction_abs > options.divergence_growth * before) {
        result.status = Status::Diverged;
        result.message = "correction norm grew by more than " +
                         std::to_string(options.divergence_growth) + "x over " +
                         std::to_string(w) + " iterations";
        break;
      }
    }
  }
  result.state.p = p;
  return result;
}

PlateauReport error_plateau_check(const std::vector<IterationRecord>& history,
                                  double correction_threshold, double change_tolerance) {
  PlateauReport report;
  for (std::size_t k = 0; k < history.size(); ++k) {
    if (history[k].correction_rel <= correction_threshold) {
      report.start = static_cast<int>(k);
      break;
    }
  }
  if (report.start < 0) return report;
  const double ref = history[static_cast<std::size_t>(report.start)].error_rel_l2;
  report.value = ref;
  for (std::size_t k = static_cast<std::size_t>(report.start) + 1; k < history.size(); ++k) {
    report.max_relative_change =
        std::max(report.max_relative_change, std::abs(history[k].error_rel_l2 - ref) / ref);
  }
  report.reached = std::isfinite(ref) && report.max_relative_change < change_tolerance;
  return report;
}

void write_history_csv(std::ostream& os, const std::vector<IterationRecord>& history) {
  const auto old_precision = os.precision(17);
  os << "N,correction_rel,error_rel_l2,residual_h,residual_L,residual_l\n";
  for (const IterationRecord& r : history) {
    os << r.n << ',' << r.correction_rel << ',' << r.error_rel_l2 << ',' << r.residual_h << ','
       << r.residual_L << ',' << r.residual_l << '\n';
  }
  os.precision(old_precision);
}

}  // namespace apdiff::gummel
