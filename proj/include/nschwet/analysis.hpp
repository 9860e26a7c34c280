#pragma once
// Closed-form interface identities and fit/extrapolation utilities: tanh
// profiles, regularized deltas, Ginzburg-Landau line concentration,
// contact-angle residuals, the critical viscosity ratio, exponential-
// divergence fits, and quadratic extrapolation to eps -> 0.

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nschwet {

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed-form phase-field profiles used for initialization and synthetic
// diagnostics tests. Vertical: phi = tanh((x0 - x)/(sqrt2 eps)); tilted:
// phi = tanh(((x0 - x) sin(theta) - (y - y0) cos(theta))/(sqrt2 eps)),
// which reduces to the vertical profile at theta = pi/2.
struct InterfaceProfile {
  enum class Kind { vertical, tilted };
  Kind kind = Kind::vertical;
  double x0 = 0.0, y0 = 0.0;
  double theta = 1.5707963267948966;
  double eps = 0.0;

  static InterfaceProfile vertical(double x0, double eps);
  static InterfaceProfile tilted(double x0, double y0, double theta, double eps);
  double value(double x, double y) const;
  std::array<double, 2> gradient(double x, double y) const;
};

double delta_eps(double s, double eps);
double delta_eps_star(double s, double eps, double theta);

// Numerically integrates the Ginzburg-Landau line density of the tanh
// profile over [-20 eps, 20 eps]; equals sigma_la to 1e-8 relative.
double gl_concentration(double eps, double sigma_la);

double contact_angle_residual(double theta, double theta_eq, double s, double eps,
                              double sigma_la);
double advective_compat_residual(double u_n_c, double v, double theta, double s, double eps);

double critical_viscosity_ratio(double theta);

struct FitResult {
  // exponential fit f = a exp(b eps) eps^c
  double a = 0.0, b = 0.0, c = 0.0;
  // quadratic fit q = q0 + q1 eps + q2 eps^2
  std::array<double, 3> quad{0.0, 0.0, 0.0};
  double residual_norm = 0.0;
  double value_at_zero = 0.0;
};

// Log-space least squares of log f = log a + b eps + c log eps, weighted by
// f_k^2 (the exact linearization of the absolute-residual fit, so the
// asymptotic small-eps samples dominate as in the reference data). Exact on
// noiseless model data; requires >= 3 strictly positive samples.
FitResult fit_exponential(const std::vector<double>& eps, const std::vector<double>& f);

// Lagrange quadratic through three (eps, q) points evaluated at eps = 0.
FitResult extrapolate_quadratic(const std::array<double, 3>& eps, const std::array<double, 3>& q);

// Adaptive Gauss-Kronrod (G7/K15) quadrature to the given absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 40);

}  // namespace nschwet
