// SPDX-License-Identifier: Apache-2.0
#include "apdiff/naive.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "apdiff/problems.hpp"

namespace apdiff::naive {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct Corner {
  int di, dj;
};
constexpr Corner kCorners[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};

Vec2 outward_normal(const Grid& g, int i, int j) {
  double nx = 0.0, ny = 0.0;
  if (i == -1) nx = -1.0;
  if (i == g.nx()) nx = 1.0;
  if (j == -1) ny = -1.0;
  if (j == g.ny()) ny = 1.0;
  if (nx != 0.0 && ny != 0.0) {
    nx *= std::numbers::sqrt2 / 2.0;
    ny *= std::numbers::sqrt2 / 2.0;
  }
  return {nx, ny};
}

}  // namespace

NaiveSystem assemble_naive(const ap::LinearProblem& problem, double degenerate_tol) {
  problem.validate();
  const Grid& g = problem.grid();
  const int nx = g.nx(), ny = g.ny();
  NaiveSystem sys{g, {}, 0};
  const int n = (nx + 1) * (ny + 1);
  linsolve::Vector rhs = linsolve::Vector::Zero(n);
  Triplets t;
  t.reserve(static_cast<std::size_t>(n) * 9);

  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const int row = sys.node_unknown(i, j);
      for (int k = 0; k < 4; ++k) {
        const int ci = i - kCorners[k].di, cj = j - kCorners[k].dj;
        if (!g.is_interior_cell(ci, cj)) continue;  // chi = 0 on ghost cells
        const auto w = ops::dh_weights(problem.b(ci, cj), g.dx(), g.dy());
        const double hw = problem.H(ci, cj) * w[static_cast<std::size_t>(k)];
        for (int m = 0; m < 4; ++m) {
          t.emplace_back(row, sys.node_unknown(ci + kCorners[m].di, cj + kCorners[m].dj),
                         hw * w[static_cast<std::size_t>(m)]);
        }
        rhs[row] += hw * problem.bS(ci, cj);
      }
      t.emplace_back(row, row, problem.eps * problem.G_node(i, j));
      rhs[row] += problem.eps * problem.f(i, j);
    }
  }
  for (int j = -1; j <= ny; ++j) {
    for (int i = -1; i <= nx; ++i) {
      if (g.is_interior_cell(i, j)) continue;
      if (std::abs(dot(problem.b(i, j), outward_normal(g, i, j))) < degenerate_tol) {
        ++sys.degenerate_rows;
      }
    }
  }

  sys.system.matrix.resize(n, n);
  sys.system.matrix.setFromTriplets(t.begin(), t.end());
  sys.system.matrix.makeCompressed();
  sys.system.rhs = std::move(rhs);
  return sys;
}

NaiveSolution solve_naive(const ap::LinearProblem& problem, const linsolve::SolverConfig& config) {
  const NaiveSystem sys = assemble_naive(problem);
  NaiveSolution out{NodeField(sys.grid), linsolve::solve(sys.system, config)};
  const Grid& g = sys.grid;
  if (out.report.solution.size() != sys.system.rhs.size()) return out;
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) out.p(i, j) = out.report.solution[sys.node_unknown(i, j)];
  if (out.report.solution.allFinite()) out.p = ap::fill_ghost(out.p, problem).p;
  return out;
}

std::vector<ConditioningRow> conditioning_sweep(const std::string& case_name,
                                                const std::vector<double>& eps_list,
                                                const Grid& grid,
                                                const linsolve::SolverConfig& config) {
  if (eps_list.empty()) throw std::invalid_argument("conditioning_sweep: empty eps list");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0) || (k > 0 && !(eps_list[k] < eps_list[k - 1]))) {
      throw std::invalid_argument("conditioning_sweep: eps list must be positive and descending");
    }
  }
  std::vector<ConditioningRow> rows;
  for (const double eps : eps_list) {
    problems::CaseParameters params;
    params.eps = eps;
    const problems::ManufacturedCase c = problems::make_case(case_name, grid, params);
    if (!c.linear) throw std::invalid_argument("conditioning_sweep: '" + case_name + "' is not linear");
    const NaiveSystem sys = assemble_naive(*c.linear);
    ConditioningRow row{eps, 0.0, 0.0, "ok"};
    const linsolve::ConditionEstimate est = linsolve::estimate_condition(sys.system.matrix);
    row.cond_estimate = est.value;
    if (est.status != "ok") row.status = est.status;
    const linsolve::SolveReport rep = linsolve::solve(sys.system, config);
    row.solve_residual = rep.relative_residual;
    if (!rep.converged && row.status == "ok") row.status = "solve-failed";
    rows.push_back(row);
  }
  return rows;
}

void write_conditioning_csv(std::ostream& os, const std::vector<ConditioningRow>& rows) {
  const auto old_precision = os.precision(17);
  os << "eps,cond_estimate,solve_residual,status\n";
  for (const ConditioningRow& r : rows) {
    os << r.eps << ',' << r.cond_estimate << ',' << r.solve_residual << ',' << r.status << '\n';
  }
  os.precision(old_precision);
}

}  // namespace apdiff::naive
