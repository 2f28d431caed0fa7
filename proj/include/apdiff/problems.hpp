// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apdiff/apcore.hpp"
#include "apdiff/grid.hpp"
#include "apdiff/gummel.hpp"

/// Manufactured test problems on [1,2]^2 with closed-form exact solutions.
namespace apdiff::problems {

/// Value, gradient and Hessian of a scalar function at one point.
struct Jet {
  double v = 0.0;
  double gx = 0.0, gy = 0.0;
  double hxx = 0.0, hxy = 0.0, hyy = 0.0;
};

enum class SplineVariant {
  /// (1/6)(2-|z|)^3 on 1 <= |z| <= 2: the C^2 cubic B-spline.
  Corrected,
  /// (1/6)(2-|z|^3) on 1 <= |z| <= 2: jumps from -1 to 0 at |z| = 2.
  Printed,
};

/// Piecewise cubic kernel, zero for |z| > 2 and at |z| = 2.
double spline(double z, SplineVariant variant = SplineVariant::Corrected);
/// Derivative of `spline` (one-sided value at the kinks of the printed variant).
double spline_derivative(double z, SplineVariant variant = SplineVariant::Corrected);

/// Closed-form primitives shared by the cases; exposed so tests can compare
/// them with finite differences.
namespace analytic {
inline constexpr double x_mid = 1.5;
inline constexpr double y_mid = 1.5;
inline constexpr double spline_width = 0.1;

/// 1 + sin^2 x sin^2 y.
Jet reaction_sin(double x, double y);
/// 1 + cos^2 x cos^2 y.
Jet diffusion_cos(double x, double y);
/// (y, -x) / sqrt(x^2 + y^2), i.e. (sin t, -cos t) with t = atan(y / x).
Vec2 direction_polar(double x, double y);
/// 1 / (1 + x^2 + y^2).
Jet rational_bump(double x, double y);
/// sin(x cos a + y sin a).
Jet plane_wave(double x, double y, double alpha);
/// sin(2 pi (x - x0) / lx) sin(2 pi (y - y0) / ly).
Jet sine_product(double x, double y, const Bounds& domain);
/// 1 + S((x - x_mid) / w) S((y - y_mid) / w), value and gradient only.
Jet spline_product(double x, double y, SplineVariant variant = SplineVariant::Corrected);
/// max(0, cos(2 pi (x - x_mid) / w) cos(2 pi (y - y_mid) / w)), value and
/// gradient (gradient zero where the product is negative).
Jet cosine_cap(double x, double y);
/// max(0, 1 - mu (x - x_mid)^2 - mu (y - y_mid)^2).
double paraboloid_cap(double x, double y, double mu);
}  // namespace analytic

struct CaseParameters {
  double eps = 0.0;
  double alpha = 0.0;  // angle case only
  double eta = 0.1;    // initial-guess perturbation amplitude
  double mu = 60.0;    // initial-guess perturbation width
  SplineVariant spline = SplineVariant::Corrected;
};

struct ManufacturedCase {
  std::string name;
  CaseParameters params;
  Grid grid;
  /// Set for linear cases.
  std::optional<ap::LinearProblem> linear;
  /// Set for nonlinear cases.
  std::optional<gummel::NonlinearProblem> nonlinear;
  ScalarFunction p_exact;
  /// Exact mean and fluctuation parts when known (empty otherwise).
  ScalarFunction pi_exact;
  ScalarFunction q_exact;
  /// Gummel initial guess (nonlinear cases).
  ScalarFunction initial_guess;
  /// eps -> 0 limit of p_exact (ap-limit case).
  ScalarFunction p_limit;

  bool is_nonlinear() const { return nonlinear.has_value(); }
};

/// Variable reaction G = H = 1 + sin^2 x sin^2 y, b = (y, -x)/r,
/// p = 1/(1 + x^2 + y^2), f = G p, b.S = b.grad p (identically zero).
ManufacturedCase case_linear_variable(const Grid& grid, double eps);

/// Uniform b = (sin a, -cos a), G = H as above, p = pi + q with
/// pi = sin(x cos a + y sin a) and q = (1/G) div(G b l) for the sine product l.
ManufacturedCase case_angle(const Grid& grid, double eps, double alpha);

/// g(p) = p^6, H = 1 + cos^2 x cos^2 y, b = (y, -x)/r, spline-product solution.
ManufacturedCase case_nonlinear(const Grid& grid, const CaseParameters& params);

/// As case_nonlinear with p = p0 + eps * max(0, cos cos).
ManufacturedCase case_ap_limit(const Grid& grid, const CaseParameters& params);

/// Names accepted by make_case: linear-variable, angle, nonlinear-spline, ap-limit.
const std::vector<std::string>& case_names();
/// Throws std::invalid_argument on an unknown name.
ManufacturedCase make_case(const std::string& name, const Grid& grid, const CaseParameters& params);

/// Initial guess sampled on the whole node lattice (ghosts included).
NodeField initial_iterate(const ManufacturedCase& c);

}  // namespace apdiff::problems
