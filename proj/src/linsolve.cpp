// SPDX-License-Identifier: Apache-2.0
#include "apdiff/linsolve.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <vector>

namespace apdiff::linsolve {

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "direct") return SolverKind::Direct;
  if (name == "iterative") return SolverKind::Iterative;
  throw std::invalid_argument("unknown solver kind '" + name + "' (direct|iterative)");
}

std::string to_string(SolverKind kind) {
  return kind == SolverKind::Direct ? "direct" : "iterative";
}

Vector to_vector(const CellField& field) {
  const Grid& g = field.grid();
  Vector v(static_cast<Eigen::Index>(g.interior_cell_count()));
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) v[g.cell_unknown(i, j)] = field(i, j);
  return v;
}

CellField to_cell_field(const Vector& values, const Grid& grid) {
  if (values.size() != static_cast<Eigen::Index>(grid.interior_cell_count())) {
    throw std::invalid_argument("to_cell_field: size mismatch");
  }
  CellField out(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) out(i, j) = values[grid.cell_unknown(i, j)];
  return out;
}

SparseMatrix assemble(const CellOperator& op, const Grid& grid) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  const auto n = static_cast<Eigen::Index>(grid.interior_cell_count());

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * 9);
  for (int cy = 0; cy < 3; ++cy) {
    for (int cx = 0; cx < 3; ++cx) {
      CellField probe(grid);
      for (int j = cy; j < ny; j += 3)
        for (int i = cx; i < nx; i += 3) probe(i, j) = 1.0;
      const CellField response = op(probe);
      // Every output cell sees exactly one probed cell of this colour in its
      // 3x3 neighbourhood.
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
              const int si = i + di;
              const int sj = j + dj;
              if (!grid.is_interior_cell(si, sj)) continue;
              if (si % 3 != cx || sj % 3 != cy) continue;
              triplets.emplace_back(grid.cell_unknown(i, j), grid.cell_unknown(si, sj),
                                    response(i, j));
            }
          }
        }
      }
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();

  // Linearity and stencil-radius check.
  const CellField at_zero = op(CellField(grid));
  if (to_vector(at_zero).lpNorm<Eigen::Infinity>() != 0.0) {
    throw AssemblyError("assemble: operator is not linear (nonzero response to zero)");
  }
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CellField x(grid);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) x(i, j) = dist(rng);
  const Vector direct = to_vector(op(x));
  const Vector via_matrix = m * to_vector(x);
  const double scale = std::max(direct.norm(), std::numeric_limits<double>::min());
  if ((direct - via_matrix).norm() > 1e-11 * scale) {
    throw AssemblyError(
        "assemble: probe mismatch (operator is nonlinear or its stencil exceeds one cell)");
  }
  return m;
}

struct LinearSolver::Impl {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  Eigen::GMRES<SparseMatrix, Eigen::IncompleteLUT<double>> gmres;
};

namespace {

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b,
                         bool transpose) {
  const Vector r = transpose ? Vector(b - a.transpose() * x) : Vector(b - a * x);
  const double denom = std::max(b.norm(), std::numeric_limits<double>::min());
  return r.norm() / denom;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

LinearSolver::LinearSolver(SparseMatrix matrix, SolverConfig config)
    : matrix_(std::move(matrix)), config_(config), impl_(std::make_unique<Impl>()) {
  if (!(config_.tol > 0.0) || config_.tol > 1e-4) {
    throw std::invalid_argument("solver tolerance must lie in (0, 1e-4]");
  }
  if (matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("LinearSolver: matrix must be square");
  }
  matrix_.makeCompressed();
  if (config_.kind == SolverKind::Direct) {
    impl_->lu.analyzePattern(matrix_);
    impl_->lu.factorize(matrix_);
    if (impl_->lu.info() != Eigen::Success) {
      throw SolverError("factorize", "sparse LU failed (numerically singular matrix): " +
                                         impl_->lu.lastErrorMessage(),
                        std::numeric_limits<double>::infinity());
    }
  } else {
    impl_->gmres.setTolerance(config_.tol * 0.1);
    impl_->gmres.setMaxIterations(config_.max_iter);
    impl_->gmres.set_restart(config_.restart);
    impl_->gmres.preconditioner().setDroptol(1e-6);
    impl_->gmres.preconditioner().setFillfactor(20);
    impl_->gmres.compute(matrix_);
    if (impl_->gmres.info() != Eigen::Success) {
      throw SolverError("factorize", "incomplete LU preconditioner failed",
                        std::numeric_limits<double>::infinity());
    }
  }
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

SolveReport LinearSolver::solve(const Vector& rhs) const {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  if (rhs.size() != matrix_.rows()) throw std::invalid_argument("solve: rhs size mismatch");

  if (config_.kind == SolverKind::Direct) {
    Vector x = impl_->lu.solve(rhs);
    double res = relative_residual(matrix_, x, rhs, false);
    Vector best = x;
    double best_res = res;
    int sweeps = 0;
    // Iterative refinement; the refinement budget is bounded by max_iter.
    const int max_sweeps = std::min(config_.max_iter, 10);
    while (std::isfinite(res) && res > config_.tol && sweeps < max_sweeps) {
      const Vector r = rhs - matrix_ * x;
      x += impl_->lu.solve(r);
      res = relative_residual(matrix_, x, rhs, false);
      ++sweeps;
      if (res < best_res) {
        best_res = res;
        best = x;
      } else {
        break;  // stagnation
      }
    }
    report.solution = std::move(best);
    report.relative_residual = best_res;
    report.iterations = sweeps;
  } else {
    Vector x = impl_->gmres.solve(rhs);
    report.iterations = static_cast<int>(impl_->gmres.iterations());
    report.relative_residual = relative_residual(matrix_, x, rhs, false);
    report.solution = std::move(x);
  }
  report.converged = std::isfinite(report.relative_residual) && report.solution.allFinite() &&
                     report.relative_residual <= config_.tol;
  if (!report.converged) {
    report.message = std::isfinite(report.relative_residual)
                         ? "residual above tolerance (near-singular or non-convergent system)"
                         : "non-finite iterate (diverging or singular system)";
  }
  report.wall_seconds = seconds_since(start);
  return report;
}

SolveReport LinearSolver::solve_transpose(const Vector& rhs) const {
  if (config_.kind != SolverKind::Direct) {
    throw std::logic_error("solve_transpose requires the direct solver");
  }
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  Vector x = impl_->lu.transpose().solve(rhs);
  report.relative_residual = relative_residual(matrix_, x, rhs, true);
  report.solution = std::move(x);
  report.converged = std::isfinite(report.relative_residual) && report.solution.allFinite();
  report.wall_seconds = seconds_since(start);
  return report;
}

SolveReport solve(const SparseSystem& system, const SolverConfig& config) {
  try {
    LinearSolver solver(system.matrix, config);
    return solver.solve(system.rhs);
  } catch (const SolverError& e) {
    SolveReport report;
    report.solution = Vector::Zero(system.rhs.size());
    report.relative_residual = std::numeric_limits<double>::infinity();
    report.message = e.what();
    return report;
  }
}

SolveReport solve(const SparseSystem& system, double tol, int max_iter) {
  SolverConfig config;
  config.tol = tol;
  config.max_iter = max_iter;
  return solve(system, config);
}

void require_converged(const SolveReport& report, const std::string& stage) {
  if (!report.converged) {
    throw SolverError(stage, report.message.empty() ? "solve did not converge" : report.message,
                      report.relative_residual);
  }
}

ConditionEstimate estimate_condition(const SparseMatrix& matrix, int max_iter,
                                     double rel_change) {
  ConditionEstimate est;
  const Eigen::Index n = matrix.cols();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Vector start(n);
  for (Eigen::Index k = 0; k < n; ++k) start[k] = dist(rng);
  start.normalize();

  // Largest eigenvalue of A^T A.
  Vector v = start;
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = matrix.transpose() * (matrix * v);
    const double next = w.norm();
    ++est.iterations;
    if (!std::isfinite(next) || next == 0.0) break;
    v = w / next;
    const bool done = std::abs(next - lambda) <= rel_change * next;
    lambda = next;
    if (done) break;
  }
  est.sigma_max = std::sqrt(lambda);

  SolverConfig cfg;
  cfg.tol = 1e-4;
  std::unique_ptr<LinearSolver> solver;
  try {
    solver = std::make_unique<LinearSolver>(matrix, cfg);
  } catch (const SolverError&) {
    est.value = std::numeric_limits<double>::infinity();
    est.status = "singular";
    return est;
  }

  // Largest eigenvalue of (A^T A)^{-1} = A^{-1} A^{-T}.
  v = start;
  double mu = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector t = solver->solve_transpose(v).solution;
    const Vector w = solver->solve(t).solution;
    const double next = w.norm();
    ++est.iterations;
    if (!std::isfinite(next)) {
      est.value = std::numeric_limits<double>::infinity();
      est.status = "overflow";
      return est;
    }
    v = w / next;
    const bool done = std::abs(next - mu) <= rel_change * next;
    mu = next;
    if (done) break;
  }
  est.sigma_min = 1.0 / std::sqrt(mu);
  est.value = est.sigma_max / est.sigma_min;
  est.status = std::isfinite(est.value) ? "ok" : "overflow";
  return est;
}

void write_coordinate(std::ostream& os, const SparseMatrix& matrix) {
  const auto old_precision = os.precision(17);
  for (int k = 0; k < matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  os.precision(old_precision);
}

}  // namespace apdiff::linsolve
