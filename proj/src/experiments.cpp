// SPDX-License-Identifier: Apache-2.0
#include "apdiff/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "apdiff/naive.hpp"

namespace apdiff::experiments {

namespace {

constexpr Bounds kUnitSquare{1.0, 2.0, 1.0, 2.0};
constexpr NormKind kNorms[3] = {NormKind::L1, NormKind::L2, NormKind::Linf};
const double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string run_label(int k, double eps) { return "M" + std::to_string(k) + " eps=" + fmt(eps); }

ReportRow base_row(const std::string& case_name, const Grid& g, double eps, double alpha) {
  ReportRow r;
  r.case_name = case_name;
  r.nx = g.nx();
  r.ny = g.ny();
  r.h = g.h();
  r.eps = eps;
  r.alpha = alpha;
  return r;
}

ReportRow with(ReportRow r, std::string quantity, std::string norm, double value) {
  r.quantity = std::move(quantity);
  r.norm = std::move(norm);
  r.value = value;
  return r;
}

void require_nonempty(const std::vector<int>& meshes, const std::vector<double>& eps,
                      const char* who) {
  if (meshes.empty() || eps.empty()) {
    throw std::invalid_argument(std::string(who) + ": mesh and eps lists must be non-empty");
  }
}

// max / min - 1 over positive values; +inf if any value is not usable.
double relative_variation(const std::vector<double>& values) {
  if (values.empty()) return kNaN;
  double lo = values.front(), hi = values.front();
  for (const double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) return std::numeric_limits<double>::infinity();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo - 1.0;
}

Check make_check(std::string name, double value, std::string requirement, bool passed) {
  return Check{std::move(name), value, std::move(requirement), passed};
}

struct LinearRun {
  ap::SolutionDecomposition sol;
  double residual = 0.0;
  double ms = 0.0;
  std::string status = "ok";
};

LinearRun run_linear(const ap::LinearProblem& problem, const linsolve::SolverConfig& solver) {
  LinearRun run;
  const auto start = Clock::now();
  try {
    ap::ApOptions options;
    options.solver = solver;
    run.sol = ap::solve_linear_ap(problem, options);
    run.residual = std::max({run.sol.h_solve.residual, run.sol.L_solve.residual,
                             run.sol.l_solve.residual});
  } catch (const linsolve::SolverError& e) {
    run.status = std::string("solver-failed: ") + e.what();
    run.residual = e.best_residual();
  }
  run.ms = elapsed_ms(start);
  return run;
}

struct NonlinearRun {
  gummel::GummelResult result;
  double residual = 0.0;
  double ms = 0.0;
};

NonlinearRun run_gummel(const problems::ManufacturedCase& c, const ExperimentConfig& config,
                        int extra_iterations) {
  gummel::GummelOptions options;
  options.stop = {config.tol_rel, config.n_max};
  options.linear.solver = config.solver;
  options.exact = sample_node(c.p_exact, c.grid);
  options.extra_iterations = extra_iterations;
  const auto start = Clock::now();
  NonlinearRun run{gummel::gummel_solve(*c.nonlinear, problems::initial_iterate(c), options), 0.0,
                   0.0};
  run.ms = elapsed_ms(start);
  for (const auto& rec : run.result.state.history) {
    run.residual = std::max({run.residual, rec.residual_h, rec.residual_L, rec.residual_l});
  }
  return run;
}

problems::CaseParameters case_params(const ExperimentConfig& config, double eps, double alpha) {
  problems::CaseParameters p;
  p.eps = eps;
  p.alpha = alpha;
  p.eta = config.eta;
  p.mu = config.mu;
  p.spline = config.spline;
  return p;
}

}  // namespace

double rel_error(const NodeField& exact, const NodeField& app, NormKind kind) {
  if (!(exact.grid() == app.grid())) throw std::invalid_argument("rel_error: grid mismatch");
  const Grid& g = exact.grid();
  NodeField diff(g);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) diff(i, j) = exact(i, j) - app(i, j);
  const double denom = interior_norm(exact, kind);
  if (denom == 0.0) throw std::invalid_argument("rel_error: exact field has zero norm");
  return interior_norm(diff, kind) / denom;
}

std::string norm_name(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Linf: return "linf";
  }
  return "?";
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                    std::string label) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_loglog: need two or more (x, y) pairs");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) {
      throw std::invalid_argument("fit_loglog: coordinates must be positive");
    }
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_loglog: x values are all equal");
  SlopeFit fit;
  fit.label = std::move(label);
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points = static_cast<int>(x.size());
  return fit;
}

std::vector<double> default_angles(int count) {
  std::vector<double> a(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    a[static_cast<std::size_t>(k)] = count == 1 ? 0.0 : 0.5 * std::numbers::pi * k / (count - 1);
  }
  return a;
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<ReportRow> ExperimentReport::select(const std::string& quantity,
                                                const std::string& norm, double eps) const {
  std::vector<ReportRow> out;
  for (const ReportRow& r : rows) {
    if (r.quantity == quantity && r.norm == norm && r.eps == eps) out.push_back(r);
  }
  return out;
}

ExperimentReport convergence_study(const ExperimentConfig& config) {
  require_nonempty(config.meshes, config.eps, "convergence_study");
  if (config.meshes.size() < 3) throw std::invalid_argument("convergence_study: need >= 3 meshes");
  const std::string name = config.case_name.empty() ? "linear-variable" : config.case_name;
  const double alpha = config.alpha.empty() ? 0.0 : config.alpha.front();
  const Thresholds& th = config.thresholds;

  ExperimentReport report;
  report.experiment = "convergence";
  // errors[eps index][norm][mesh index]
  std::vector<std::array<std::vector<double>, 3>> errors(config.eps.size());
  std::vector<double> hs;
  double worst_dh_pi = 0.0;

  for (const int k : config.meshes) hs.push_back(Grid::square_mesh(kUnitSquare, k).h());
  for (std::size_t e = 0; e < config.eps.size(); ++e) {
    const double eps = config.eps[e];
    for (const int k : config.meshes) {
      const Grid grid = Grid::square_mesh(kUnitSquare, k);
      const problems::ManufacturedCase c = problems::make_case(name, grid, case_params(config, eps, alpha));
      if (!c.linear) throw std::invalid_argument("convergence_study: '" + name + "' is not linear");
      const LinearRun run = run_linear(*c.linear, config.solver);
      ReportRow base = base_row(name, grid, eps, alpha);
      base.residual = run.residual;
      base.runtime_ms = run.ms;
      base.status = run.status;
      const bool ok = run.status == "ok";
      const NodeField exact = sample_node(c.p_exact, grid);
      for (int n = 0; n < 3; ++n) {
        const double err = ok ? rel_error(exact, run.sol.p, kNorms[n]) : kNaN;
        errors[e][static_cast<std::size_t>(n)].push_back(err);
        report.rows.push_back(with(base, "error", norm_name(kNorms[n]), err));
      }
      const double dh_pi =
          ok ? run.sol.dh_pi_l2 / interior_norm(run.sol.p, NormKind::L2) : kNaN;
      worst_dh_pi = std::isnan(dh_pi) ? std::numeric_limits<double>::infinity()
                                      : std::max(worst_dh_pi, dh_pi);
      report.rows.push_back(with(base, "dh_pi_rel", "l2", dh_pi));
    }
  }

  for (std::size_t e = 0; e < config.eps.size(); ++e) {
    for (int n = 0; n < 3; ++n) {
      const std::string label = "eps=" + fmt(config.eps[e]) + " " + norm_name(kNorms[n]);
      const auto& err = errors[e][static_cast<std::size_t>(n)];
      if (std::any_of(err.begin(), err.end(), [](double v) { return !(v > 0.0); })) {
        report.checks.push_back(make_check("slope " + label, kNaN, "all runs succeed", false));
        continue;
      }
      const SlopeFit fit = fit_loglog(hs, err, label);
      report.fits.push_back(fit);
      if (kNorms[n] == NormKind::L1) continue;
      report.checks.push_back(make_check(
          "slope " + label, fit.slope, "in [" + fmt(th.slope_min) + ", " + fmt(th.slope_max) + "]",
          fit.slope >= th.slope_min && fit.slope <= th.slope_max));
    }
  }
  if (config.eps.size() > 1) {
    for (std::size_t m = 0; m < config.meshes.size(); ++m) {
      double spread = 0.0;
      for (int n = 0; n < 3; ++n) {
        std::vector<double> v;
        for (std::size_t e = 0; e < config.eps.size(); ++e) v.push_back(errors[e][static_cast<std::size_t>(n)][m]);
        spread = std::max(spread, relative_variation(v));
      }
      report.checks.push_back(make_check("eps spread M" + std::to_string(config.meshes[m]), spread,
                                         "< " + fmt(th.eps_spread), spread < th.eps_spread));
    }
  }
  report.checks.push_back(make_check("max ||d_h pi|| / ||p||", worst_dh_pi,
                                     "<= " + fmt(th.dh_pi_max), worst_dh_pi <= th.dh_pi_max));
  return report;
}

ExperimentReport angle_sweep(const ExperimentConfig& config) {
  require_nonempty(config.meshes, config.eps, "angle_sweep");
  const std::string name = config.case_name.empty() ? "angle" : config.case_name;
  const std::vector<double> alphas = config.alpha.empty() ? default_angles() : config.alpha;
  const Thresholds& th = config.thresholds;
  const int k = config.meshes.front();
  const Grid grid = Grid::square_mesh(kUnitSquare, k);

  ExperimentReport report;
  report.experiment = "angle";
  // errors[eps index][norm][alpha index]
  std::vector<std::array<std::vector<double>, 3>> errors(config.eps.size());
  for (std::size_t e = 0; e < config.eps.size(); ++e) {
    for (const double alpha : alphas) {
      const problems::ManufacturedCase c =
          problems::make_case(name, grid, case_params(config, config.eps[e], alpha));
      if (!c.linear) throw std::invalid_argument("angle_sweep: '" + name + "' is not linear");
      const LinearRun run = run_linear(*c.linear, config.solver);
      ReportRow base = base_row(name, grid, config.eps[e], alpha);
      base.residual = run.residual;
      base.runtime_ms = run.ms;
      base.status = run.status;
      const NodeField exact = sample_node(c.p_exact, grid);
      for (int n = 0; n < 3; ++n) {
        const double err = run.status == "ok" ? rel_error(exact, run.sol.p, kNorms[n]) : kNaN;
        errors[e][static_cast<std::size_t>(n)].push_back(err);
        report.rows.push_back(with(base, "error", norm_name(kNorms[n]), err));
      }
    }
  }
  for (std::size_t e = 0; e < config.eps.size(); ++e) {
    for (int n = 0; n < 3; ++n) {
      const double var = relative_variation(errors[e][static_cast<std::size_t>(n)]);
      const double limit = kNorms[n] == NormKind::Linf ? th.angle_linf_variation : th.angle_l12_variation;
      report.checks.push_back(make_check(
          "angle variation eps=" + fmt(config.eps[e]) + " " + norm_name(kNorms[n]), var,
          "<= " + fmt(limit), var <= limit));
    }
  }
  for (std::size_t e = 1; e < config.eps.size(); ++e) {
    double worst = 0.0;
    for (int n = 0; n < 3; ++n) {
      const auto& a = errors[0][static_cast<std::size_t>(n)];
      const auto& b = errors[e][static_cast<std::size_t>(n)];
      for (std::size_t m = 0; m < a.size(); ++m) {
        const double d = std::abs(a[m] - b[m]) / b[m];
        worst = std::isfinite(d) ? std::max(worst, d) : std::numeric_limits<double>::infinity();
      }
    }
    report.checks.push_back(make_check(
        "angle curves eps=" + fmt(config.eps[0]) + " vs eps=" + fmt(config.eps[e]), worst,
        "<= " + fmt(th.angle_eps_agreement), worst <= th.angle_eps_agreement));
  }
  return report;
}

ExperimentReport gummel_study(const ExperimentConfig& config) {
  require_nonempty(config.meshes, config.eps, "gummel_study");
  const std::string name = config.case_name.empty() ? "nonlinear-spline" : config.case_name;
  const Thresholds& th = config.thresholds;
  constexpr int kPlateauIterations = 2;

  ExperimentReport report;
  report.experiment = "gummel";
  for (const int k : config.meshes) {
    const Grid grid = Grid::square_mesh(kUnitSquare, k);
    for (const double eps : config.eps) {
      const problems::ManufacturedCase c =
          problems::make_case(name, grid, case_params(config, eps, 0.0));
      if (!c.nonlinear) throw std::invalid_argument("gummel_study: '" + name + "' is not nonlinear");
      const NonlinearRun run = run_gummel(c, config, kPlateauIterations);
      const gummel::GummelResult& res = run.result;
      const std::string label = run_label(k, eps);
      report.histories.emplace_back(label, res.state.history);

      ReportRow base = base_row(name, grid, eps, 0.0);
      base.iterations = res.converged_at >= 0 ? res.converged_at + 1 : res.state.n;
      base.residual = run.residual;
      base.runtime_ms = run.ms;
      base.status = gummel::to_string(res.status);
      if (!res.message.empty()) base.status += ": " + res.message;
      const NodeField exact = sample_node(c.p_exact, grid);
      std::array<double, 3> err{};
      for (int n = 0; n < 3; ++n) {
        err[static_cast<std::size_t>(n)] = rel_error(exact, res.p, kNorms[n]);
        report.rows.push_back(with(base, "error", norm_name(kNorms[n]), err[static_cast<std::size_t>(n)]));
      }

      const bool converged = res.status == gummel::Status::Converged;
      report.checks.push_back(make_check(
          "iterations " + label, base.iterations,
          "converged in <= " + std::to_string(th.gummel_max_iterations),
          converged && base.iterations <= th.gummel_max_iterations));
      const gummel::PlateauReport plateau =
          gummel::error_plateau_check(res.state.history, 1e-10, th.plateau_change);
      report.checks.push_back(make_check("error plateau " + label, plateau.max_relative_change,
                                         "change < " + fmt(th.plateau_change), plateau.reached));

      const auto ref = config.reference.find({k, eps});
      if (ref != config.reference.end()) {
        const double tol = k >= 500 ? th.table_tolerance_fine : th.table_tolerance;
        for (int n = 0; n < 3; ++n) {
          const double target = ref->second[static_cast<std::size_t>(n)];
          const double dev = std::abs(err[static_cast<std::size_t>(n)] - target) / target;
          report.checks.push_back(make_check(
              "reference " + norm_name(kNorms[n]) + " " + label, err[static_cast<std::size_t>(n)],
              "within " + fmt(100.0 * tol) + "% of " + fmt(target), dev <= tol));
        }
      }
    }
  }

  if (config.divergence_eta > 0.0) {
    const int k = config.meshes.front();
    const double eps = config.eps.front();
    const Grid grid = Grid::square_mesh(kUnitSquare, k);
    problems::CaseParameters params = case_params(config, eps, 0.0);
    params.eta = config.divergence_eta;
    const problems::ManufacturedCase c = problems::make_case(name, grid, params);
    const NonlinearRun run = run_gummel(c, config, 0);
    const std::string label = run_label(k, eps) + " eta=" + fmt(config.divergence_eta);
    report.histories.emplace_back(label, run.result.state.history);
    ReportRow row = base_row(name, grid, eps, 0.0);
    row.iterations = run.result.state.n;
    row.residual = run.residual;
    row.runtime_ms = run.ms;
    row.status = gummel::to_string(run.result.status);
    if (!run.result.message.empty()) row.status += ": " + run.result.message;
    report.rows.push_back(with(row, "error", "l2",
                               rel_error(sample_node(c.p_exact, grid), run.result.p, NormKind::L2)));
    report.checks.push_back(make_check("divergence " + label, row.iterations,
                                       "status diverged",
                                       run.result.status == gummel::Status::Diverged));
  }
  return report;
}

ExperimentReport epsilon_limit_study(const ExperimentConfig& config) {
  require_nonempty(config.meshes, config.eps, "epsilon_limit_study");
  const std::string name = config.case_name.empty() ? "ap-limit" : config.case_name;
  const Thresholds& th = config.thresholds;
  std::vector<double> positive;
  for (const double e : config.eps) {
    if (e > 0.0) positive.push_back(e);
  }
  std::sort(positive.begin(), positive.end(), std::greater<>());
  if (positive.size() < 2) throw std::invalid_argument("epsilon_limit_study: need >= 2 positive eps");

  ExperimentReport report;
  report.experiment = "eps-limit";
  std::vector<double> plateaus, hs;
  for (const int k : config.meshes) {
    const Grid grid = Grid::square_mesh(kUnitSquare, k);
    const problems::ManufacturedCase c0 =
        problems::make_case(name, grid, case_params(config, 0.0, 0.0));
    if (!c0.nonlinear || !c0.p_limit) {
      throw std::invalid_argument("epsilon_limit_study: '" + name + "' has no eps -> 0 limit");
    }
    const NodeField limit = sample_node(c0.p_limit, grid);
    const double limit_norm = interior_norm(limit, NormKind::L2);
    const NonlinearRun run0 = run_gummel(c0, config, 0);
    const NodeField& p0_app = run0.result.p;
    const double e0 = rel_error(limit, p0_app, NormKind::L2);

    ReportRow base0 = base_row(name, grid, 0.0, 0.0);
    base0.iterations = run0.result.state.n;
    base0.residual = run0.residual;
    base0.runtime_ms = run0.ms;
    base0.status = gummel::to_string(run0.result.status);
    report.rows.push_back(with(base0, "e0", "l2", e0));
    report.rows.push_back(with(base0, "E_eps", "l2", e0));
    report.rows.push_back(with(base0, "E_eps_app", "l2", 0.0));

    std::vector<double> fit_eps, fit_err;
    double smallest_e_eps = kNaN;
    for (const double eps : positive) {
      const problems::ManufacturedCase c =
          problems::make_case(name, grid, case_params(config, eps, 0.0));
      const NonlinearRun run = run_gummel(c, config, 0);
      const NodeField& p = run.result.p;
      NodeField diff(grid);
      for (int j = 0; j <= grid.ny(); ++j)
        for (int i = 0; i <= grid.nx(); ++i) diff(i, j) = p(i, j) - p0_app(i, j);
      const double e_eps = rel_error(limit, p, NormKind::L2);
      const double e_app = interior_norm(diff, NormKind::L2) / limit_norm;
      ReportRow base = base_row(name, grid, eps, 0.0);
      base.iterations = run.result.state.n;
      base.residual = run.residual;
      base.runtime_ms = run.ms;
      base.status = gummel::to_string(run.result.status);
      report.rows.push_back(with(base, "E_eps", "l2", e_eps));
      report.rows.push_back(with(base, "E_eps_app", "l2", e_app));
      if (e_app > th.limit_noise_floor) {
        fit_eps.push_back(eps);
        fit_err.push_back(e_app);
      }
      smallest_e_eps = e_eps;
    }

    const std::string mesh = "M" + std::to_string(k);
    if (fit_eps.size() >= 2) {
      const SlopeFit fit = fit_loglog(fit_eps, fit_err, "E_eps_app " + mesh);
      report.fits.push_back(fit);
      report.checks.push_back(make_check(
          "E_eps_app slope " + mesh + " (" + std::to_string(fit.points) + " eps)", fit.slope,
          "in [" + fmt(th.limit_slope_min) + ", " + fmt(th.limit_slope_max) + "]",
          fit.slope >= th.limit_slope_min && fit.slope <= th.limit_slope_max));
    } else {
      report.checks.push_back(make_check("E_eps_app slope " + mesh, kNaN,
                                         ">= 2 eps above the noise floor", false));
    }
    const double dev = std::abs(smallest_e_eps - e0) / e0;
    report.checks.push_back(make_check("plateau " + mesh, smallest_e_eps,
                                       "within " + fmt(100.0 * th.limit_plateau_tolerance) +
                                           "% of e0 = " + fmt(e0),
                                       dev <= th.limit_plateau_tolerance));
    plateaus.push_back(smallest_e_eps);
    hs.push_back(grid.h());
  }
  for (std::size_t m = 1; m < plateaus.size(); ++m) {
    const double expected = (hs[m] / hs[0]) * (hs[m] / hs[0]);
    const double ratio = plateaus[m] / plateaus[0];
    const double factor = ratio / expected;
    report.checks.push_back(make_check(
        "plateau h^2 scaling M" + std::to_string(config.meshes[m]) + "/M" +
            std::to_string(config.meshes[0]),
        factor, "observed/expected ratio in [1/" + fmt(th.limit_scaling_factor) + ", " +
                    fmt(th.limit_scaling_factor) + "]",
        factor >= 1.0 / th.limit_scaling_factor && factor <= th.limit_scaling_factor));
  }
  return report;
}

ExperimentReport conditioning_study(const ExperimentConfig& config) {
  require_nonempty(config.meshes, config.eps, "conditioning_study");
  const std::string name = config.case_name.empty() ? "linear-variable" : config.case_name;
  const Thresholds& th = config.thresholds;
  std::vector<double> eps = config.eps;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  const int k = config.meshes.front();
  const Grid grid = Grid::square_mesh(kUnitSquare, k);

  ExperimentReport report;
  report.experiment = "conditioning";
  const auto start = Clock::now();
  const std::vector<naive::ConditioningRow> sweep =
      naive::conditioning_sweep(name, eps, grid, config.solver);
  const double sweep_ms = elapsed_ms(start) / static_cast<double>(sweep.size());

  std::vector<double> conds, ap_errors;
  for (const naive::ConditioningRow& c : sweep) {
    ReportRow row = base_row(name, grid, c.eps, 0.0);
    row.cond = c.cond_estimate;
    row.residual = c.solve_residual;
    row.runtime_ms = sweep_ms;
    row.status = c.status;
    report.rows.push_back(with(row, "cond", "-", c.cond_estimate));
    conds.push_back(c.cond_estimate);

    const problems::ManufacturedCase mc = problems::make_case(name, grid, case_params(config, c.eps, 0.0));
    const NodeField exact = sample_node(mc.p_exact, grid);
    const LinearRun run = run_linear(*mc.linear, config.solver);
    ReportRow ap_row = base_row(name, grid, c.eps, 0.0);
    ap_row.residual = run.residual;
    ap_row.runtime_ms = run.ms;
    ap_row.status = run.status;
    const double err = run.status == "ok" ? rel_error(exact, run.sol.p, NormKind::L2) : kNaN;
    ap_errors.push_back(err);
    report.rows.push_back(with(ap_row, "ap_error", "l2", err));

    const naive::NaiveSolution ns = naive::solve_naive(*mc.linear, config.solver);
    ReportRow nv_row = base_row(name, grid, c.eps, 0.0);
    nv_row.residual = ns.report.relative_residual;
    nv_row.runtime_ms = ns.report.wall_seconds * 1e3;
    nv_row.status = ns.report.converged ? "ok" : "solve-failed";
    report.rows.push_back(with(nv_row, "naive_error", "l2", rel_error(exact, ns.p, NormKind::L2)));
  }

  bool increasing = true;
  for (std::size_t m = 1; m < conds.size(); ++m) increasing = increasing && conds[m] > conds[m - 1];
  report.checks.push_back(make_check("naive condition strictly increasing as eps decreases",
                                     conds.back(), "strictly increasing", increasing));
  const double ratio = conds.back() / conds.front();
  report.checks.push_back(make_check("naive condition ratio eps=" + fmt(eps.back()) + " : eps=" +
                                         fmt(eps.front()),
                                     ratio, ">= " + fmt(th.cond_ratio_min),
                                     ratio >= th.cond_ratio_min));
  const double var = relative_variation(ap_errors);
  report.checks.push_back(make_check("AP l2 error variation over eps", var,
                                     "< " + fmt(th.ap_error_variation), var < th.ap_error_variation));
  return report;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"convergence", "angle", "gummel", "eps-limit",
                                              "conditioning"};
  return names;
}

ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& config) {
  if (name == "convergence") return convergence_study(config);
  if (name == "angle") return angle_sweep(config);
  if (name == "gummel") return gummel_study(config);
  if (name == "eps-limit") return epsilon_limit_study(config);
  if (name == "conditioning") return conditioning_study(config);
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

void write_rows_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  const auto old_precision = os.precision(17);
  os << "case,nx,ny,h,eps,alpha,quantity,norm,value,iterations,residual,cond,runtime_ms,status\n";
  for (const ReportRow& r : rows) {
    os << r.case_name << ',' << r.nx << ',' << r.ny << ',' << r.h << ',' << r.eps << ','
       << r.alpha << ',' << r.quantity << ',' << r.norm << ',' << r.value << ',' << r.iterations
       << ',' << r.residual << ',' << r.cond << ',' << r.runtime_ms << ",\"" << r.status
       << "\"\n";
  }
  os.precision(old_precision);
}

}  // namespace apdiff::experiments
