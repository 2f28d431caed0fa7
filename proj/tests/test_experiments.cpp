// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "apdiff/experiments.hpp"
#include "support/oracles.hpp"

using namespace apdiff;
using namespace apdiff::experiments;
using namespace apdiff::testing;

TEST(RelError, Examples) {
  const Grid g = make_grid(kUnit, 6, 6);
  std::mt19937_64 rng(71);
  const NodeField a = random_nodes(g, rng, 1.0, 2.0);
  for (NormKind k : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
    EXPECT_EQ(rel_error(a, a, k), 0.0);
    EXPECT_DOUBLE_EQ(rel_error(NodeField(g, 2.0), NodeField(g, 1.0), k), 0.5);
  }
}

TEST(RelError, GhostsExcluded) {
  const Grid g = make_grid(kUnit, 6, 6);
  std::mt19937_64 rng(72);
  const NodeField exact = random_nodes(g, rng, 1.0, 2.0);
  NodeField app = random_nodes(g, rng, 1.0, 2.0);
  const double before = rel_error(exact, app, NormKind::L2);
  set_ghosts(app, 1e6);
  EXPECT_EQ(rel_error(exact, app, NormKind::L2), before);
}

TEST(RelError, Rejections) {
  const Grid g = make_grid(kUnit, 6, 6);
  EXPECT_THROW(rel_error(NodeField(g), NodeField(g, 1.0), NormKind::L2), std::invalid_argument);
  EXPECT_THROW(rel_error(NodeField(g, 1.0), NodeField(make_grid(kUnit, 6, 7), 1.0), NormKind::L1),
               std::invalid_argument);
  EXPECT_EQ(norm_name(NormKind::Linf), "linf");
}

TEST(FitLogLog, PowerLaw) {
  const std::vector<double> h{0.04, 0.02, 0.01, 0.005};
  std::vector<double> e;
  for (double v : h) e.push_back(3.0 * v * v);
  const SlopeFit f = fit_loglog(h, e, "x");
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
  EXPECT_EQ(f.points, 4);
  EXPECT_EQ(f.label, "x");
  EXPECT_THROW(fit_loglog({1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(fit_loglog({1.0, 2.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(fit_loglog({1.0, 2.0}, {0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(fit_loglog({1.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST(DefaultAngles, UniformOnQuarterTurn) {
  const auto a = default_angles();
  ASSERT_EQ(a.size(), 19u);
  EXPECT_EQ(a.front(), 0.0);
  EXPECT_NEAR(a.back(), std::numbers::pi / 2, 1e-15);
  for (std::size_t k = 1; k < a.size(); ++k) EXPECT_NEAR(a[k] - a[k - 1], std::numbers::pi / 36, 1e-15);
}

namespace {

ExperimentConfig small_convergence() {
  ExperimentConfig c;
  c.case_name = "linear-variable";
  c.meshes = {25, 50, 100};
  c.eps = {1e-1, 0.0};
  return c;
}

}  // namespace

TEST(Convergence, SmallStudy) {
  const ExperimentReport r = convergence_study(small_convergence());
  EXPECT_TRUE(r.passed());
  const auto l2 = r.select("error", "l2", 0.0);
  ASSERT_EQ(l2.size(), 3u);
  // Doubling both mesh dimensions quarters the error within 25%.
  EXPECT_NEAR(l2[1].value / l2[2].value, 4.0, 1.0);
  EXPECT_EQ(r.select("dh_pi_rel", "l2", 0.1).size(), 3u);
  for (const SlopeFit& f : r.fits) EXPECT_EQ(f.points, 3);
}

TEST(Convergence, Deterministic) {
  ExperimentConfig c = small_convergence();
  c.meshes = {10, 20, 40};
  const ExperimentReport a = convergence_study(c), b = convergence_study(c);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].quantity, b.rows[k].quantity);
    EXPECT_EQ(a.rows[k].value, b.rows[k].value);
    EXPECT_EQ(a.rows[k].residual, b.rows[k].residual);
  }
}

TEST(Convergence, Rejections) {
  ExperimentConfig c = small_convergence();
  c.meshes = {10, 20};
  EXPECT_THROW(convergence_study(c), std::invalid_argument);
  c.meshes = {10, 20, 40};
  c.case_name = "nonlinear-spline";
  EXPECT_THROW(convergence_study(c), std::invalid_argument);
  c.eps.clear();
  EXPECT_THROW(convergence_study(c), std::invalid_argument);
}

TEST(Angle, EndpointsComparable) {
  ExperimentConfig c;
  c.case_name = "angle";
  c.meshes = {40};
  c.eps = {1e-3};
  c.alpha = {0.0, std::numbers::pi / 2};
  const ExperimentReport r = angle_sweep(c);
  const auto rows = r.select("error", "l2", 1e-3);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LT(std::max(rows[0].value, rows[1].value) / std::min(rows[0].value, rows[1].value), 2.0);
}

TEST(EpsLimit, ZeroEpsRowIsBaseline) {
  ExperimentConfig c;
  c.case_name = "ap-limit";
  c.meshes = {30, 60};
  c.eps = {1e-1, 1e-2, 1e-3, 0.0};
  const ExperimentReport r = epsilon_limit_study(c);
  const auto e0 = r.select("E_eps", "l2", 0.0);
  const auto app0 = r.select("E_eps_app", "l2", 0.0);
  ASSERT_EQ(e0.size(), 2u);
  ASSERT_EQ(app0.size(), 2u);
  EXPECT_EQ(app0[0].value, 0.0);
  EXPECT_GT(e0[0].value, e0[1].value);
  c.eps = {1e-1, 0.0};
  EXPECT_THROW(epsilon_limit_study(c), std::invalid_argument);
}

TEST(Gummel, DivergenceRunIsReported) {
  ExperimentConfig c;
  c.case_name = "nonlinear-spline";
  c.meshes = {40};
  c.eps = {1e-1};
  c.divergence_eta = 1000.0;
  const ExperimentReport r = gummel_study(c);
  bool found = false;
  for (const Check& k : r.checks)
    if (k.name.rfind("divergence", 0) == 0) {
      found = true;
      EXPECT_TRUE(k.passed);
    }
  EXPECT_TRUE(found);
  EXPECT_FALSE(r.histories.empty());
}

TEST(Registry, Experiments) {
  EXPECT_EQ(experiment_names().size(), 5u);
  EXPECT_THROW(run_experiment("bogus", {}), std::invalid_argument);
}

TEST(Io, RowsCsvHeader) {
  std::ostringstream os;
  write_rows_csv(os, {ReportRow{}});
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')),
            "case,nx,ny,h,eps,alpha,quantity,norm,value,iterations,residual,cond,runtime_ms,status");
}
