// SPDX-License-Identifier: Apache-2.0
// apdiff <experiment> --config <file> --out <dir>
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "apdiff/experiments.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace apdiff;

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

experiments::ExperimentConfig parse_config(const json& j) {
  experiments::ExperimentConfig c;
  read_if(j, "case", c.case_name);
  read_if(j, "meshes", c.meshes);
  read_if(j, "eps", c.eps);
  read_if(j, "alpha", c.alpha);
  if (j.contains("gummel")) {
    const json& g = j.at("gummel");
    read_if(g, "eta", c.eta);
    read_if(g, "mu", c.mu);
    read_if(g, "tol_rel", c.tol_rel);
    read_if(g, "N_max", c.n_max);
    read_if(g, "divergence_eta", c.divergence_eta);
  }
  if (j.contains("spline")) {
    const std::string s = j.at("spline").get<std::string>();
    if (s == "corrected") {
      c.spline = problems::SplineVariant::Corrected;
    } else if (s == "printed") {
      c.spline = problems::SplineVariant::Printed;
    } else {
      throw std::invalid_argument("spline must be 'corrected' or 'printed'");
    }
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    if (s.contains("kind")) c.solver.kind = linsolve::parse_solver_kind(s.at("kind").get<std::string>());
    read_if(s, "tol", c.solver.tol);
    read_if(s, "max_iter", c.solver.max_iter);
    read_if(s, "restart", c.solver.restart);
  }
  if (j.contains("thresholds")) {
    const json& t = j.at("thresholds");
    experiments::Thresholds& th = c.thresholds;
    read_if(t, "slope_min", th.slope_min);
    read_if(t, "slope_max", th.slope_max);
    read_if(t, "eps_spread", th.eps_spread);
    read_if(t, "dh_pi_max", th.dh_pi_max);
    read_if(t, "angle_l12_variation", th.angle_l12_variation);
    read_if(t, "angle_linf_variation", th.angle_linf_variation);
    read_if(t, "angle_eps_agreement", th.angle_eps_agreement);
    read_if(t, "gummel_max_iterations", th.gummel_max_iterations);
    read_if(t, "plateau_change", th.plateau_change);
    read_if(t, "table_tolerance", th.table_tolerance);
    read_if(t, "table_tolerance_fine", th.table_tolerance_fine);
    read_if(t, "limit_slope_min", th.limit_slope_min);
    read_if(t, "limit_slope_max", th.limit_slope_max);
    read_if(t, "limit_plateau_tolerance", th.limit_plateau_tolerance);
    read_if(t, "limit_scaling_factor", th.limit_scaling_factor);
    read_if(t, "limit_noise_floor", th.limit_noise_floor);
    read_if(t, "cond_ratio_min", th.cond_ratio_min);
    read_if(t, "ap_error_variation", th.ap_error_variation);
  }
  if (j.contains("reference")) {
    for (const json& r : j.at("reference")) {
      c.reference[{r.at("mesh").get<int>(), r.at("eps").get<double>()}] = {
          r.at("l1").get<double>(), r.at("l2").get<double>(), r.at("linf").get<double>()};
    }
  }
  return c;
}

std::string safe_name(std::string s) {
  for (char& ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '.') ch = '_';
  }
  return s;
}

json summary(const experiments::ExperimentReport& report) {
  json j;
  j["experiment"] = report.experiment;
  j["passed"] = report.passed();
  j["fits"] = json::array();
  for (const auto& f : report.fits) {
    j["fits"].push_back({{"label", f.label}, {"slope", f.slope}, {"intercept", f.intercept},
                         {"points", f.points}});
  }
  j["checks"] = json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"requirement", c.requirement},
                           {"passed", c.passed}});
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic-preserving anisotropic diffusion experiments"};
  std::string experiment, config_path, out_dir = ".";
  app.add_option("experiment", experiment, "convergence | angle | gummel | eps-limit | conditioning")
      ->required()
      ->check(CLI::IsMember(experiments::experiment_names()));
  app.add_option("--config", config_path, "JSON experiment configuration")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    experiments::ExperimentConfig config = parse_config(json::parse(in));
    config.out_dir = out_dir;
    fs::create_directories(out_dir);

    const experiments::ExperimentReport report = experiments::run_experiment(experiment, config);

    const fs::path out(out_dir);
    {
      std::ofstream csv(out / (experiment + ".csv"));
      experiments::write_rows_csv(csv, report.rows);
    }
    for (const auto& [label, history] : report.histories) {
      std::ofstream csv(out / (experiment + "_history_" + safe_name(label) + ".csv"));
      gummel::write_history_csv(csv, history);
    }
    const json s = summary(report);
    std::ofstream(out / (experiment + "_summary.json")) << s.dump(2) << '\n';

    for (const auto& c : report.checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.value << " ("
                << c.requirement << ")\n";
    }
    std::cout << (report.passed() ? "all checks passed" : "some checks failed") << '\n';
    return report.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "apdiff: " << e.what() << '\n';
    return 2;
  }
}
