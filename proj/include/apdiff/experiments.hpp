// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "apdiff/gummel.hpp"
#include "apdiff/linsolve.hpp"
#include "apdiff/problems.hpp"

/// Experiment drivers behind the command-line runner: mesh refinement,
/// angle sweep, Gummel convergence, eps -> 0 limit and naive conditioning.
namespace apdiff::experiments {

/// Relative error ||exact - app|| / ||exact|| over I. Throws
/// std::invalid_argument on a zero denominator or mismatched grids.
double rel_error(const NodeField& exact, const NodeField& app, NormKind kind);

std::string norm_name(NormKind kind);

struct SlopeFit {
  std::string label;
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

/// Ordinary least squares of log(y) against log(x). Needs two or more
/// points with positive coordinates.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                    std::string label = {});

struct Thresholds {
  double slope_min = 1.8;
  double slope_max = 2.2;
  double eps_spread = 0.10;        // pairwise relative difference across eps
  double dh_pi_max = 1e-9;         // ||d_h pi|| / ||p||
  double angle_l12_variation = 0.06;
  double angle_linf_variation = 0.10;
  double angle_eps_agreement = 0.05;
  int gummel_max_iterations = 6;
  double plateau_change = 0.01;
  double table_tolerance = 0.10;
  double table_tolerance_fine = 0.15;  // meshes with 500 or more cells per side
  double limit_slope_min = 0.8;
  double limit_slope_max = 1.2;
  double limit_plateau_tolerance = 0.05;
  double limit_scaling_factor = 2.0;
  double limit_noise_floor = 1e-10;
  double cond_ratio_min = 1e3;
  double ap_error_variation = 0.10;
};

/// Reference errors (l1, l2, linf) keyed by (cells per side, eps).
using ReferenceTable = std::map<std::pair<int, double>, std::array<double, 3>>;

struct ExperimentConfig {
  std::string case_name;
  /// k x k cell meshes.
  std::vector<int> meshes;
  std::vector<double> eps;
  std::vector<double> alpha;
  double eta = 0.1;
  double mu = 60.0;
  double tol_rel = 1e-12;
  int n_max = 30;
  /// Perturbation amplitude of an extra Gummel run expected to diverge
  /// (0 disables it).
  double divergence_eta = 0.0;
  problems::SplineVariant spline = problems::SplineVariant::Corrected;
  linsolve::SolverConfig solver;
  Thresholds thresholds;
  ReferenceTable reference;
  std::string out_dir = ".";
};

/// 19 uniformly spaced angles on [0, pi/2].
std::vector<double> default_angles(int count = 19);

struct ReportRow {
  std::string case_name;
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  double eps = 0.0;
  double alpha = 0.0;
  std::string quantity;  // "error", "dh_pi_rel", "E_eps", "E_eps_app", "e0", "cond", ...
  std::string norm;      // "l1", "l2", "linf" or "-"
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // largest relative residual of the linear solves
  double cond = 0.0;
  double runtime_ms = 0.0;
  std::string status = "ok";
};

struct Check {
  std::string name;
  double value = 0.0;
  std::string requirement;
  bool passed = false;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<ReportRow> rows;
  std::vector<SlopeFit> fits;
  std::vector<Check> checks;
  /// Gummel histories keyed by run label.
  std::vector<std::pair<std::string, std::vector<gummel::IterationRecord>>> histories;

  bool passed() const;
  /// Rows matching all given keys; eps and alpha compared exactly.
  std::vector<ReportRow> select(const std::string& quantity, const std::string& norm,
                                double eps) const;
};

/// AP solves of a linear case over meshes x eps: l1/l2/linf errors, slopes
/// per (eps, norm), ||d_h pi|| / ||p||, spread of errors across eps.
ExperimentReport convergence_study(const ExperimentConfig& config);

/// Uniform-direction case on one mesh over angles x eps: error variation
/// over the angles and agreement between eps values.
ExperimentReport angle_sweep(const ExperimentConfig& config);

/// Gummel runs of the nonlinear case over meshes x eps: final errors against
/// the reference table, iteration counts, error plateau, divergence run.
ExperimentReport gummel_study(const ExperimentConfig& config);

/// eps -> 0 family over meshes x eps (eps = 0 included): E_eps, E_eps_app,
/// e0, slope of E_eps_app in eps, plateau value and its mesh scaling.
ExperimentReport epsilon_limit_study(const ExperimentConfig& config);

/// Naive-system condition estimates over eps and AP errors at the same eps.
ExperimentReport conditioning_study(const ExperimentConfig& config);

/// Dispatch by name: convergence, angle, gummel, eps-limit, conditioning.
ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& config);
const std::vector<std::string>& experiment_names();

/// `case,nx,ny,h,eps,alpha,quantity,norm,value,iterations,residual,cond,runtime_ms,status`
void write_rows_csv(std::ostream& os, const std::vector<ReportRow>& rows);

}  // namespace apdiff::experiments
