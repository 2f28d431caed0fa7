// SPDX-License-Identifier: Apache-2.0
#include "apdiff/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace apdiff::problems {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_unit_square(const Grid& grid) {
  const Bounds& b = grid.bounds();
  if (b.x_min != 1.0 || b.x_max != 2.0 || b.y_min != 1.0 || b.y_max != 2.0) {
    throw std::invalid_argument("manufactured cases are defined on [1,2]x[1,2]");
  }
}

double sixth_power(double p) {
  const double p2 = p * p;
  return p2 * p2 * p2;
}

double sixth_power_derivative(double p) {
  const double p2 = p * p;
  return 6.0 * p2 * p2 * p;
}

}  // namespace

double spline(double z, SplineVariant variant) {
  const double a = std::abs(z);
  if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
  if (a < 2.0) {
    if (variant == SplineVariant::Corrected) {
      const double t = 2.0 - a;
      return t * t * t / 6.0;
    }
    return (2.0 - a * a * a) / 6.0;
  }
  return 0.0;
}

double spline_derivative(double z, SplineVariant variant) {
  const double a = std::abs(z);
  const double s = z < 0.0 ? -1.0 : 1.0;
  if (a < 1.0) return -2.0 * z + 1.5 * z * a;
  if (a < 2.0) {
    if (variant == SplineVariant::Corrected) {
      const double t = 2.0 - a;
      return -0.5 * t * t * s;
    }
    return -0.5 * a * a * s;
  }
  return 0.0;
}

namespace analytic {

Jet reaction_sin(double x, double y) {
  const double sx = std::sin(x), sy = std::sin(y);
  Jet j;
  j.v = 1.0 + sx * sx * sy * sy;
  j.gx = std::sin(2.0 * x) * sy * sy;
  j.gy = sx * sx * std::sin(2.0 * y);
  j.hxx = 2.0 * std::cos(2.0 * x) * sy * sy;
  j.hyy = 2.0 * sx * sx * std::cos(2.0 * y);
  j.hxy = std::sin(2.0 * x) * std::sin(2.0 * y);
  return j;
}

Jet diffusion_cos(double x, double y) {
  const double cx = std::cos(x), cy = std::cos(y);
  Jet j;
  j.v = 1.0 + cx * cx * cy * cy;
  j.gx = -std::sin(2.0 * x) * cy * cy;
  j.gy = -cx * cx * std::sin(2.0 * y);
  j.hxx = -2.0 * std::cos(2.0 * x) * cy * cy;
  j.hyy = -2.0 * cx * cx * std::cos(2.0 * y);
  j.hxy = std::sin(2.0 * x) * std::sin(2.0 * y);
  return j;
}

Vec2 direction_polar(double x, double y) {
  const double r = std::hypot(x, y);
  return {y / r, -x / r};
}

Jet rational_bump(double x, double y) {
  const double d = 1.0 + x * x + y * y;
  const double d2 = d * d, d3 = d2 * d;
  Jet j;
  j.v = 1.0 / d;
  j.gx = -2.0 * x / d2;
  j.gy = -2.0 * y / d2;
  j.hxx = -2.0 / d2 + 8.0 * x * x / d3;
  j.hyy = -2.0 / d2 + 8.0 * y * y / d3;
  j.hxy = 8.0 * x * y / d3;
  return j;
}

Jet plane_wave(double x, double y, double alpha) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double arg = x * ca + y * sa;
  const double s = std::sin(arg), c = std::cos(arg);
  Jet j;
  j.v = s;
  j.gx = c * ca;
  j.gy = c * sa;
  j.hxx = -s * ca * ca;
  j.hxy = -s * ca * sa;
  j.hyy = -s * sa * sa;
  return j;
}

Jet sine_product(double x, double y, const Bounds& domain) {
  const double kx = kTwoPi / (domain.x_max - domain.x_min);
  const double ky = kTwoPi / (domain.y_max - domain.y_min);
  const double ax = kx * (x - domain.x_min), ay = ky * (y - domain.y_min);
  const double sx = std::sin(ax), cx = std::cos(ax);
  const double sy = std::sin(ay), cy = std::cos(ay);
  Jet j;
  j.v = sx * sy;
  j.gx = kx * cx * sy;
  j.gy = ky * sx * cy;
  j.hxx = -kx * kx * sx * sy;
  j.hyy = -ky * ky * sx * sy;
  j.hxy = kx * ky * cx * cy;
  return j;
}

Jet spline_product(double x, double y, SplineVariant variant) {
  const double zx = (x - x_mid) / spline_width, zy = (y - y_mid) / spline_width;
  const double sx = spline(zx, variant), sy = spline(zy, variant);
  Jet j;
  j.v = 1.0 + sx * sy;
  j.gx = spline_derivative(zx, variant) * sy / spline_width;
  j.gy = sx * spline_derivative(zy, variant) / spline_width;
  return j;
}

Jet cosine_cap(double x, double y) {
  const double k = kTwoPi / spline_width;
  const double cx = std::cos(k * (x - x_mid)), cy = std::cos(k * (y - y_mid));
  Jet j;
  const double prod = cx * cy;
  if (prod <= 0.0) return j;
  j.v = prod;
  j.gx = -k * std::sin(k * (x - x_mid)) * cy;
  j.gy = -k * cx * std::sin(k * (y - y_mid));
  return j;
}

double paraboloid_cap(double x, double y, double mu) {
  const double dx = x - x_mid, dy = y - y_mid;
  return std::max(0.0, 1.0 - mu * dx * dx - mu * dy * dy);
}

}  // namespace analytic

using namespace analytic;

ManufacturedCase case_linear_variable(const Grid& grid, double eps) {
  require_unit_square(grid);
  const ScalarFunction G = [](double x, double y) { return reaction_sin(x, y).v; };
  const ScalarFunction p = [](double x, double y) { return rational_bump(x, y).v; };
  const ScalarFunction f = [](double x, double y) {
    return reaction_sin(x, y).v * rational_bump(x, y).v;
  };
  const ScalarFunction bS = [](double x, double y) {
    const Jet pj = rational_bump(x, y);
    return dot(direction_polar(x, y), Vec2{pj.gx, pj.gy});
  };

  ap::LinearProblem lin{eps,
                        sample_node(G, grid),
                        sample_cell(G, grid),
                        sample_cell(G, grid),
                        sample_cell_vec(direction_polar, grid),
                        sample_node(f, grid),
                        sample_cell(bS, grid)};
  ManufacturedCase c{"linear-variable", CaseParameters{eps}, grid, std::move(lin), {}, p, {}, {},
                     {}, {}};
  c.pi_exact = p;
  c.q_exact = [](double, double) { return 0.0; };
  return c;
}

ManufacturedCase case_angle(const Grid& grid, double eps, double alpha) {
  require_unit_square(grid);
  const Vec2 b{std::sin(alpha), -std::cos(alpha)};
  const Bounds dom = grid.bounds();

  auto along = [b](const Jet& j) { return b.x * j.gx + b.y * j.gy; };
  auto along2 = [b](const Jet& j) {
    return b.x * b.x * j.hxx + 2.0 * b.x * b.y * j.hxy + b.y * b.y * j.hyy;
  };

  const ScalarFunction pi = [alpha](double x, double y) { return plane_wave(x, y, alpha).v; };
  // q = (1/G) D(G l) = D l + l DG / G with D = b.grad.
  const ScalarFunction q = [=](double x, double y) {
    const Jet g = reaction_sin(x, y), l = sine_product(x, y, dom);
    return along(l) + l.v * along(g) / g.v;
  };
  const ScalarFunction p = [=](double x, double y) { return pi(x, y) + q(x, y); };
  // b.S = D p = D q = D^2 l + D l D(ln G) + l D^2(ln G).
  const ScalarFunction bS = [=](double x, double y) {
    const Jet g = reaction_sin(x, y), l = sine_product(x, y, dom);
    const double dlng = along(g) / g.v;
    const double d2lng = along2(g) / g.v - dlng * dlng;
    return along2(l) + along(l) * dlng + l.v * d2lng;
  };
  const ScalarFunction G = [](double x, double y) { return reaction_sin(x, y).v; };
  const ScalarFunction f = [=](double x, double y) { return G(x, y) * p(x, y); };

  ap::LinearProblem lin{eps,
                        sample_node(G, grid),
                        sample_cell(G, grid),
                        sample_cell(G, grid),
                        sample_cell_vec([b](double, double) { return b; }, grid),
                        sample_node(f, grid),
                        sample_cell(bS, grid)};
  CaseParameters params{eps, alpha};
  return ManufacturedCase{"angle", params, grid, std::move(lin), {}, p, pi, q, {}, {}};
}

namespace {

gummel::NonlinearProblem sixth_power_problem(const Grid& grid, double eps,
                                             const std::function<Jet(double, double)>& exact) {
  const ScalarFunction H = [](double x, double y) { return diffusion_cos(x, y).v; };
  const ScalarFunction f = [exact](double x, double y) { return sixth_power(exact(x, y).v); };
  const ScalarFunction bS = [exact](double x, double y) {
    const Jet j = exact(x, y);
    return dot(direction_polar(x, y), Vec2{j.gx, j.gy});
  };
  return gummel::NonlinearProblem{eps,
                                  sample_cell(H, grid),
                                  sample_cell_vec(direction_polar, grid),
                                  sample_node(f, grid),
                                  sample_cell(bS, grid),
                                  sixth_power,
                                  sixth_power_derivative};
}

}  // namespace

ManufacturedCase case_nonlinear(const Grid& grid, const CaseParameters& params) {
  require_unit_square(grid);
  const SplineVariant variant = params.spline;
  const auto exact = [variant](double x, double y) { return spline_product(x, y, variant); };
  const ScalarFunction p = [exact](double x, double y) { return exact(x, y).v; };
  const ScalarFunction p0 = [p, eta = params.eta, mu = params.mu](double x, double y) {
    return p(x, y) + eta * paraboloid_cap(x, y, mu);
  };
  return ManufacturedCase{"nonlinear-spline", params,
                          grid,               {},
                          sixth_power_problem(grid, params.eps, exact),
                          p,                  {},
                          {},                 p0,
                          {}};
}

ManufacturedCase case_ap_limit(const Grid& grid, const CaseParameters& params) {
  require_unit_square(grid);
  const SplineVariant variant = params.spline;
  const double eps = params.eps;
  const auto exact = [variant, eps](double x, double y) {
    Jet j = spline_product(x, y, variant);
    const Jet c = cosine_cap(x, y);
    j.v += eps * c.v;
    j.gx += eps * c.gx;
    j.gy += eps * c.gy;
    return j;
  };
  const ScalarFunction p = [exact](double x, double y) { return exact(x, y).v; };
  const ScalarFunction limit = [variant](double x, double y) {
    return spline_product(x, y, variant).v;
  };
  const ScalarFunction p0 = [p, eta = params.eta, mu = params.mu](double x, double y) {
    return p(x, y) + eta * paraboloid_cap(x, y, mu);
  };
  return ManufacturedCase{"ap-limit", params, grid, {}, sixth_power_problem(grid, eps, exact),
                          p,          {},     {},   p0, limit};
}

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names{"linear-variable", "angle", "nonlinear-spline",
                                              "ap-limit"};
  return names;
}

ManufacturedCase make_case(const std::string& name, const Grid& grid,
                           const CaseParameters& params) {
  if (name == "linear-variable") return case_linear_variable(grid, params.eps);
  if (name == "angle") return case_angle(grid, params.eps, params.alpha);
  if (name == "nonlinear-spline") return case_nonlinear(grid, params);
  if (name == "ap-limit") return case_ap_limit(grid, params);
  throw std::invalid_argument("unknown case '" + name + "'");
}

NodeField initial_iterate(const ManufacturedCase& c) {
  if (!c.initial_guess) throw std::invalid_argument("case '" + c.name + "' has no initial guess");
  return sample_node(c.initial_guess, c.grid);
}

}  // namespace apdiff::problems
