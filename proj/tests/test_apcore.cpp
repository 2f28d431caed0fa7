// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "apdiff/apcore.hpp"
#include "apdiff/problems.hpp"
#include "support/oracles.hpp"

using namespace apdiff;
using namespace apdiff::testing;

namespace {

ap::LinearProblem random_problem(const Grid& g, double eps, std::mt19937_64& rng) {
  ap::LinearProblem p;
  p.eps = eps;
  p.G_node = random_nodes(g, rng, 0.5, 2.0);
  p.G_cell = random_cells(g, rng, 0.5, 2.0);
  p.H = random_cells(g, rng, 0.5, 2.0);
  p.b = random_directions(g, rng);
  p.f = random_nodes(g, rng);
  p.bS = random_cells(g, rng);
  return p;
}

ap::LinearProblem constant_problem(const Grid& g, double eps, Vec2 b) {
  ap::LinearProblem p;
  p.eps = eps;
  p.G_node = NodeField(g, 1.0);
  p.G_cell = CellField(g, 1.0);
  p.H = CellField(g, 1.0);
  p.b = uniform_direction(g, b);
  p.f = NodeField(g);
  p.bS = CellField(g);
  return p;
}

double max_abs(const CellField& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_interior(const NodeField& f) {
  double m = 0.0;
  for (int j = 0; j <= f.grid().ny(); ++j)
    for (int i = 0; i <= f.grid().nx(); ++i) m = std::max(m, std::abs(f(i, j)));
  return m;
}

double rel_l2(const NodeField& exact, const NodeField& app) {
  NodeField d = app;
  for (std::size_t k = 0; k < d.data().size(); ++k) d.data()[k] -= exact.data()[k];
  return interior_norm(d, NormKind::L2) / interior_norm(exact, NormKind::L2);
}

double cell_error(const CellField& app, const ScalarFunction& exact) {
  const Grid& g = app.grid();
  double m = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) m = std::max(m, std::abs(app(i, j) - exact(g.xc(i), g.yc(j))));
  return m;
}

}  // namespace

class DenseOracle : public ::testing::TestWithParam<double> {};

TEST_P(DenseOracle, AllThreeSolvesMatch) {
  const double eps = GetParam();
  std::mt19937_64 rng(static_cast<unsigned>(21 + eps * 1000));
  for (const auto& [nx, ny] : {std::pair{8, 8}, std::pair{5, 7}, std::pair{2, 3}}) {
    const Grid g = make_grid(kUnit, nx, ny);
    const ap::LinearProblem p = random_problem(g, eps, rng);
    const DenseApSolution d = dense_ap_solution(p);
    const ap::SolutionDecomposition s = ap::solve_linear_ap(p);
    EXPECT_LT(rel_diff(interior_cells(s.h), d.h), 1e-12) << nx << "x" << ny;
    if (eps > 0.0) {
      EXPECT_LT(rel_diff(interior_cells(s.L), d.L), 1e-12);
    }
    EXPECT_LT(rel_diff(interior_cells(s.l), d.l), 1e-12);

    const CellField h = ap::solve_h(p);
    EXPECT_LT(rel_diff(interior_cells(h), d.h), 1e-12);
    const CellField L = ap::solve_L(p);
    if (eps > 0.0) {
      EXPECT_LT(rel_diff(interior_cells(L), d.L), 1e-12);
    }
    EXPECT_LT(rel_diff(interior_cells(ap::solve_l(p, L)), d.l), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Eps, DenseOracle, ::testing::Values(0.0, 1e-3, 1.0));

TEST(SolveH, ZeroSourceGivesZero) {
  std::mt19937_64 rng(22);
  const Grid g = make_grid(kUnit, 7, 6);
  ap::LinearProblem p = random_problem(g, 0.1, rng);
  p.f = NodeField(g);
  EXPECT_EQ(max_abs(ap::solve_h(p)), 0.0);
}

TEST(SolveH, ConstantRatioGivesZero) {
  std::mt19937_64 rng(23);
  const Grid g = make_grid(kUnit, 7, 6);
  ap::LinearProblem p = random_problem(g, 0.1, rng);
  for (std::size_t k = 0; k < p.f.data().size(); ++k) p.f.data()[k] = 3.0 * p.G_node.data()[k];
  EXPECT_LT(max_abs(ap::solve_h(p)), 1e-12);
}

TEST(ReconstructPi, Examples) {
  std::mt19937_64 rng(24);
  const Grid g = make_grid(kUnit, 6, 6);
  ap::LinearProblem p = random_problem(g, 0.1, rng);
  p.f = p.G_node;
  EXPECT_NEAR(max_abs_interior(ap::reconstruct_pi(p, CellField(g))), 1.0, 1e-15);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) EXPECT_NEAR(ap::reconstruct_pi(p, CellField(g))(i, j), 1.0, 1e-15);
  p.f = NodeField(g);
  EXPECT_EQ(max_abs_interior(ap::reconstruct_pi(p, CellField(g))), 0.0);
}

TEST(SolveL, VanishesAtZeroEps) {
  std::mt19937_64 rng(25);
  const Grid g = make_grid(kUnit, 6, 6);
  const ap::LinearProblem p = random_problem(g, 0.0, rng);
  EXPECT_EQ(max_abs(ap::solve_L(p)), 0.0);
  EXPECT_EQ(max_abs(ap::solve_linear_ap(p).L), 0.0);
}

TEST(SolveL, ConsistentSourceGivesZero) {
  std::mt19937_64 rng(26);
  const Grid g = make_grid(kUnit, 6, 6);
  ap::LinearProblem p = random_problem(g, 0.5, rng);
  NodeField ratio(g);
  for (std::size_t k = 0; k < ratio.data().size(); ++k) ratio.data()[k] = p.f.data()[k] / p.G_node.data()[k];
  p.bS = ops::apply_dh(ratio, ops::OperatorContext(p.b));
  EXPECT_LT(max_abs(ap::solve_L(p)), 1e-13);
}

TEST(SolveLSmall, ZeroDataGivesZero) {
  std::mt19937_64 rng(27);
  const Grid g = make_grid(kUnit, 6, 6);
  ap::LinearProblem p = random_problem(g, 0.5, rng);
  p.bS = CellField(g);
  EXPECT_EQ(max_abs(ap::solve_l(p, CellField(g))), 0.0);
}

TEST(SolveLSmall, OneDimensionalTridiagonalOracle) {
  // b = (1, 0), unit coefficients, a single row of cells: the l-system is
  // -(1/2)(l_{i-1} - 2 l_i + l_{i+1})/dx^2 * 2 restricted by the ghost ring.
  const Grid g = make_grid(kUnit, 8, 2);
  ap::LinearProblem p = constant_problem(g, 0.0, {1.0, 0.0});
  std::mt19937_64 rng(28);
  p.bS = random_cells(g, rng, -1.0, 1.0, true);
  const Eigen::MatrixXd a = dense_elliptic(g, p.b, Eigen::VectorXd::Ones(16), Eigen::VectorXd::Ones(27));
  const Eigen::VectorXd expect = a.fullPivLu().solve(-interior_cells(p.bS));
  EXPECT_LT(rel_diff(interior_cells(ap::solve_l(p, CellField(g))), expect), 1e-12);
  // The oracle matrix itself is the hand-derived tensor stencil.
  const double dx2 = g.dx() * g.dx();
  EXPECT_NEAR(a(1, 1) * dx2, 1.0, 1e-12);
  EXPECT_NEAR(a(1, 0) * dx2, -0.5, 1e-12);
  EXPECT_NEAR(a(1, 9) * dx2, 0.5, 1e-12);
  EXPECT_NEAR(a(1, 8) * dx2, -0.25, 1e-12);
}

TEST(ReconstructQ, Examples) {
  const Grid g = make_grid(kUnit, 6, 6);
  std::mt19937_64 rng(29);
  ap::LinearProblem p = random_problem(g, 0.1, rng);
  EXPECT_EQ(max_abs_interior(ap::reconstruct_q(p, CellField(g))), 0.0);

  p.G_node = NodeField(g, 1.0);
  p.G_cell = CellField(g, 1.0);
  CellField l(g);
  l(2, 3) = 1.0;
  const NodeField q = ap::reconstruct_q(p, l);
  const NodeField ds = ops::apply_dh_star(l, ops::OperatorContext(p.b));
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) EXPECT_DOUBLE_EQ(q(i, j), ds(i, j));
}

TEST(Pipeline, DecompositionIdentityAndGhostRing) {
  std::mt19937_64 rng(30);
  const Grid g = make_grid(kUnit, 9, 7);
  const ap::LinearProblem p = random_problem(g, 0.01, rng);
  const ap::SolutionDecomposition s = ap::solve_linear_ap(p);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) EXPECT_EQ(s.p(i, j), s.pi(i, j) + s.q(i, j));
  for (const CellField* f : {&s.h, &s.L, &s.l})
    for (int j = -1; j <= g.ny(); ++j)
      for (int i = -1; i <= g.nx(); ++i)
        if (!g.is_interior_cell(i, j)) {
          EXPECT_EQ((*f)(i, j), 0.0);
        }
  EXPECT_LE(s.h_solve.residual, 1e-12);
  EXPECT_LE(s.l_solve.residual, 1e-12);
}

TEST(Pipeline, ConstantSolutionForAnyEps) {
  std::mt19937_64 rng(31);
  const Grid g = make_grid(kUnit, 10, 10);
  for (double eps : {1.0, 1e-4, 0.0}) {
    ap::LinearProblem p = random_problem(g, eps, rng);
    for (std::size_t k = 0; k < p.f.data().size(); ++k) p.f.data()[k] = 2.5 * p.G_node.data()[k];
    p.bS = CellField(g);
    const ap::SolutionDecomposition s = ap::solve_linear_ap(p);
    for (double v : s.p.data()) EXPECT_NEAR(v, 2.5, 1e-11);
  }
}

TEST(Pipeline, MeanPartKernelOnManufacturedCase) {
  const Grid g = Grid::square_mesh(kUnit, 50);
  for (double eps : {0.1, 0.0}) {
    const auto c = problems::case_linear_variable(g, eps);
    const ap::SolutionDecomposition s = ap::solve_linear_ap(*c.linear);
    EXPECT_LE(s.dh_pi_l2 / interior_norm(s.p, NormKind::L2), 1e-10);
    const CellField dpi = ops::apply_dh_interior(s.pi, ops::OperatorContext(c.linear->b));
    EXPECT_NEAR(interior_norm(dpi, NormKind::L2), s.dh_pi_l2, 1e-15);
  }
}

TEST(Pipeline, RegularLimitInEps) {
  const Grid g = Grid::square_mesh(kUnit, 50);
  const auto a = ap::solve_linear_ap(*problems::case_linear_variable(g, 1e-9).linear);
  const auto b = ap::solve_linear_ap(*problems::case_linear_variable(g, 0.0).linear);
  EXPECT_LE(rel_l2(b.p, a.p), 1e-8);
}

TEST(Pipeline, SecondOrderOnManufacturedCase) {
  std::vector<double> err;
  for (int k : {25, 50, 100}) {
    const Grid g = Grid::square_mesh(kUnit, k);
    const auto c = problems::case_linear_variable(g, 0.0);
    err.push_back(rel_l2(sample_node(c.p_exact, g), ap::solve_linear_ap(*c.linear).p));
  }
  EXPECT_GT(err[0] / err[1], 3.4);
  EXPECT_GT(err[1] / err[2], 3.4);
}

TEST(Pipeline, AngleCaseRecoversMeanAndAuxiliaryParts) {
  const double alpha = 0.7;
  std::vector<double> pi_err, q_err, l_err;
  for (int k : {40, 80}) {
    const Grid g = Grid::square_mesh(kUnit, k);
    const auto c = problems::case_angle(g, 1e-3, alpha);
    const auto s = ap::solve_linear_ap(*c.linear);
    pi_err.push_back(rel_l2(sample_node(c.pi_exact, g), s.pi));
    q_err.push_back(rel_l2(sample_node(c.q_exact, g), s.q));
    l_err.push_back(cell_error(s.l, [](double x, double y) {
      return problems::analytic::sine_product(x, y, kUnit).v;
    }));
  }
  EXPECT_LT(pi_err[0], 1e-2);
  EXPECT_GT(pi_err[0] / pi_err[1], 3.0);
  EXPECT_GT(q_err[0] / q_err[1], 3.0);
  EXPECT_GT(l_err[0] / l_err[1], 3.0);
}

TEST(Pipeline, OrthogonalitySurrogate) {
  // With G l vanishing on the ghost ring, summation by parts turns
  // sum G pi q into -sum (d_h pi) G l, so the surrogate sits at the level of
  // ||d_h pi|| rather than at discretization error.
  for (int k : {25, 50, 100}) {
    const Grid g = Grid::square_mesh(kUnit, k);
    const auto c = problems::case_angle(g, 1e-3, 0.3);
    const auto s = ap::solve_linear_ap(*c.linear);
    double dotp = 0.0;
    for (int j = 0; j <= g.ny(); ++j)
      for (int i = 0; i <= g.nx(); ++i) dotp += c.linear->G_node(i, j) * s.pi(i, j) * s.q(i, j);
    dotp *= g.dx() * g.dy();
    const double ratio =
        std::abs(dotp) / (interior_norm(s.pi, NormKind::L2) * interior_norm(s.q, NormKind::L2));
    EXPECT_LE(ratio, 1e-10) << k;
  }
}

TEST(GhostFill, ReproducesAffineExtension) {
  std::mt19937_64 rng(32);
  const Grid g = make_grid(kUnit, 12, 9);
  const CellVectorField b = random_directions(g, rng);
  const NodeField exact = sample_node([](double x, double y) { return 1.0 + 0.4 * x - 2.0 * y; }, g);
  const CellField bS = ops::apply_dh(exact, ops::OperatorContext(b));
  NodeField p = exact;
  set_ghosts(p, 0.0);
  const ap::GhostFillResult r = ap::fill_ghost(p, b, bS);
  EXPECT_LE(r.report.defect, 1e-12);
  EXPECT_FALSE(r.report.defect_exceeded);
  for (std::size_t k = 0; k < exact.data().size(); ++k) EXPECT_NEAR(r.p.data()[k], exact.data()[k], 1e-11);
}

TEST(GhostFill, ConstantData) {
  std::mt19937_64 rng(33);
  const Grid g = make_grid(kUnit, 7, 7);
  NodeField p(g, 4.0);
  set_ghosts(p, -100.0);
  const ap::GhostFillResult r = ap::fill_ghost(p, random_directions(g, rng), CellField(g));
  EXPECT_LT(r.report.defect, 1e-13);
  for (double v : r.p.data()) EXPECT_NEAR(v, 4.0, 1e-12);
}

TEST(GhostFill, InteriorValuesUnchanged) {
  std::mt19937_64 rng(34);
  const Grid g = make_grid(kUnit, 7, 5);
  const NodeField p = random_nodes(g, rng);
  const ap::GhostFillResult r = ap::fill_ghost(p, random_directions(g, rng), random_cells(g, rng));
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) EXPECT_EQ(r.p(i, j), p(i, j));
  EXPECT_LE(r.report.defect, 1e-12);
}

TEST(GhostFill, ManufacturedBoundaryValuesSecondOrder) {
  std::vector<double> err;
  for (int k : {50, 100}) {
    const Grid g = Grid::square_mesh(kUnit, k);
    const auto c = problems::case_linear_variable(g, 0.0);
    const NodeField exact = sample_node(c.p_exact, g);
    const ap::GhostFillResult r = ap::fill_ghost(exact, *c.linear);
    double m = 0.0;
    for (int j = -1; j <= g.ny() + 1; ++j)
      for (int i = -1; i <= g.nx() + 1; ++i)
        if (!g.is_interior_node(i, j)) m = std::max(m, std::abs(r.p(i, j) - exact(i, j)));
    err.push_back(m);
  }
  EXPECT_LT(err[0], 10.0 * (1.0 / 50) * (1.0 / 50));
  EXPECT_GT(err[0] / err[1], 3.0);
}

TEST(Validate, RejectsInvalidProblems) {
  std::mt19937_64 rng(35);
  const Grid g = make_grid(kUnit, 5, 5);
  const ap::LinearProblem good = random_problem(g, 0.1, rng);
  EXPECT_NO_THROW(good.validate());
  auto bad = good;
  bad.eps = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.G_node(2, 2) = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.H(1, 1) = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.G_cell(0, 0) = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.f = NodeField(make_grid(kUnit, 6, 5));
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.f(3, 3) = NAN;
  EXPECT_THROW(ap::solve_linear_ap(bad), std::invalid_argument);
}
