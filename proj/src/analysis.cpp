#include "nschwet/analysis.hpp"

#include <cmath>

namespace nschwet {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kPi = 3.14159265358979323846;

double sech(double x) { return 1.0 / std::cosh(x); }
}  // namespace

InterfaceProfile InterfaceProfile::vertical(double x0, double eps) {
  InterfaceProfile p;
  p.kind = Kind::vertical;
  p.x0 = x0;
  p.eps = eps;
  return p;
}

InterfaceProfile InterfaceProfile::tilted(double x0, double y0, double theta, double eps) {
  InterfaceProfile p;
  p.kind = Kind::tilted;
  p.x0 = x0;
  p.y0 = y0;
  p.theta = theta;
  p.eps = eps;
  return p;
}

double InterfaceProfile::value(double x, double y) const {
  const double d = (kind == Kind::vertical)
                       ? (x0 - x)
                       : (x0 - x) * std::sin(theta) - (y - y0) * std::cos(theta);
  return std::tanh(d / (kSqrt2 * eps));
}

std::array<double, 2> InterfaceProfile::gradient(double x, double y) const {
  const double st = (kind == Kind::vertical) ? 1.0 : std::sin(theta);
  const double ct = (kind == Kind::vertical) ? 0.0 : std::cos(theta);
  const double d = (x0 - x) * st - (y - y0) * ct;
  const double s = sech(d / (kSqrt2 * eps));
  const double dtanh = s * s / (kSqrt2 * eps);
  return {-st * dtanh, -ct * dtanh};
}

double delta_eps(double s, double eps) {
  if (!(eps > 0.0)) throw AnalysisError("delta_eps requires eps > 0");
  const double c = sech(s / (kSqrt2 * eps));
  const double c2 = c * c;
  return 3.0 / (4.0 * kSqrt2 * eps) * c2 * c2;
}

double delta_eps_star(double s, double eps, double theta) {
  if (!(theta > 0.0 && theta < kPi)) throw AnalysisError("delta_eps_star requires theta in (0, pi)");
  return std::sin(theta) * delta_eps(s * std::sin(theta), eps);
}

double gl_concentration(double eps, double sigma_la) {
  if (!(eps > 0.0) || !(sigma_la > 0.0))
    throw AnalysisError("gl_concentration requires positive eps and sigma_la");
  const double sigma = 3.0 * sigma_la / (2.0 * kSqrt2);
  auto density = [&](double s) {
    const double t = std::tanh(s / (kSqrt2 * eps));
    const double dphi = (1.0 - t * t) / (kSqrt2 * eps);
    const double psi = 0.25 * (t * t - 1.0) * (t * t - 1.0);
    return 0.5 * sigma * eps * dphi * dphi + sigma / eps * psi;
  };
  return integrate_adaptive(density, -20.0 * eps, 20.0 * eps, 1e-10 * std::max(1.0, sigma_la));
}

double contact_angle_residual(double theta, double theta_eq, double s, double eps,
                              double sigma_la) {
  if (!(theta > 0.0 && theta < kPi) || !(theta_eq > 0.0 && theta_eq < kPi))
    throw AnalysisError("contact_angle_residual requires angles in (0, pi)");
  const double c = sech(s * std::sin(theta) / (kSqrt2 * eps));
  return 0.75 * sigma_la * (std::cos(theta) - std::cos(theta_eq)) * c * c;
}

double advective_compat_residual(double u_n_c, double v, double theta, double s, double eps) {
  if (!(theta > 0.0 && theta < kPi))
    throw AnalysisError("advective_compat_residual requires theta in (0, pi)");
  const double c = sech(s * std::sin(theta) / (kSqrt2 * eps));
  return (u_n_c - v) * std::sin(theta) / (kSqrt2 * eps) * c * c;
}

double critical_viscosity_ratio(double theta) {
  if (!(theta > 0.0 && theta < kPi))
    throw AnalysisError("critical_viscosity_ratio requires theta in (0, pi)");
  const double s = std::sin(theta), c = std::cos(theta);
  const double num = (theta * c - s) * ((theta - kPi) * (theta - kPi) - s * s);
  const double den = ((theta - kPi) * c - s) * (theta * theta - s * s);
  return num / den;
}

FitResult fit_exponential(const std::vector<double>& eps, const std::vector<double>& f) {
  if (eps.size() != f.size()) throw AnalysisError("fit_exponential: size mismatch");
  if (eps.size() < 3) throw AnalysisError("fit_exponential requires at least 3 samples");
  const size_t n = eps.size();
  for (size_t k = 0; k < n; ++k)
    if (!(eps[k] > 0.0) || !(f[k] > 0.0))
      throw AnalysisError("fit_exponential requires strictly positive samples");
  // weighted normal equations for [log a, b, c]
  double m[3][3] = {};
  double r[3] = {};
  for (size_t k = 0; k < n; ++k) {
    const double w = f[k] * f[k];
    const double base[3] = {1.0, eps[k], std::log(eps[k])};
    const double y = std::log(f[k]);
    for (int i = 0; i < 3; ++i) {
      r[i] += w * base[i] * y;
      for (int j = 0; j < 3; ++j) m[i][j] += w * base[i] * base[j];
    }
  }
  // 3x3 Gaussian elimination with partial pivoting
  int piv[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int best = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::fabs(m[row][col]) > std::fabs(m[best][col])) best = row;
    std::swap(m[col], m[best]);
    std::swap(r[col], r[best]);
    std::swap(piv[col], piv[best]);
    if (m[col][col] == 0.0) throw AnalysisError("fit_exponential: singular system");
    for (int row = col + 1; row < 3; ++row) {
      const double fac = m[row][col] / m[col][col];
      for (int j = col; j < 3; ++j) m[row][j] -= fac * m[col][j];
      r[row] -= fac * r[col];
    }
  }
  double sol[3];
  for (int row = 2; row >= 0; --row) {
    double s = r[row];
    for (int j = row + 1; j < 3; ++j) s -= m[row][j] * sol[j];
    sol[row] = s / m[row][row];
  }
  FitResult out;
  out.a = std::exp(sol[0]);
  out.b = sol[1];
  out.c = sol[2];
  double res = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const double model = out.a * std::exp(out.b * eps[k]) * std::pow(eps[k], out.c);
    res += (model - f[k]) * (model - f[k]);
  }
  out.residual_norm = std::sqrt(res);
  return out;
}

FitResult extrapolate_quadratic(const std::array<double, 3>& eps,
                                const std::array<double, 3>& q) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (eps[i] == eps[j]) throw AnalysisError("extrapolate_quadratic: duplicate eps");
  FitResult out;
  double v0 = 0.0;
  for (int i = 0; i < 3; ++i) {
    double li = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) li *= (0.0 - eps[j]) / (eps[i] - eps[j]);
    v0 += q[i] * li;
  }
  out.value_at_zero = v0;
  // monomial coefficients from the 2x2 reduced Vandermonde system
  const double e0 = eps[0], e1 = eps[1], e2 = eps[2];
  const double a11 = e1 - e0, a12 = e1 * e1 - e0 * e0;
  const double a21 = e2 - e0, a22 = e2 * e2 - e0 * e0;
  const double b1 = q[1] - q[0], b2 = q[2] - q[0];
  const double d = a11 * a22 - a12 * a21;
  out.quad[1] = (b1 * a22 - a12 * b2) / d;
  out.quad[2] = (a11 * b2 - b1 * a21) / d;
  out.quad[0] = q[0] - out.quad[1] * e0 - out.quad[2] * e0 * e0;
  out.residual_norm = 0.0;
  return out;
}

// ------------------------------------------------------------- quadrature ---

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1]
constexpr double kKronrodX[8] = {0.0,
                                 0.2077849550078985,
                                 0.4058451513773972,
                                 0.5860872354676911,
                                 0.7415311855993945,
                                 0.8648644233597691,
                                 0.9491079123427585,
                                 0.9914553711208126};
constexpr double kKronrodW[8] = {0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
                                 0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
                                 0.0630920926299786, 0.0229353220105292};
constexpr double kGaussW[4] = {0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
                               0.1294849661688697};

struct PanelResult {
  double k15 = 0.0;
  double err = 0.0;
};

PanelResult panel(const std::function<double(double)>& f, double a, double b) {
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double fv[15];
  fv[7] = f(c);
  for (int i = 1; i < 8; ++i) {
    fv[7 - i] = f(c - h * kKronrodX[i]);
    fv[7 + i] = f(c + h * kKronrodX[i]);
  }
  double k15 = kKronrodW[0] * fv[7];
  for (int i = 1; i < 8; ++i) k15 += kKronrodW[i] * (fv[7 - i] + fv[7 + i]);
  double g7 = kGaussW[0] * fv[7];
  for (int i = 1; i < 4; ++i) g7 += kGaussW[i] * (fv[7 - 2 * i] + fv[7 + 2 * i]);
  PanelResult r;
  r.k15 = k15 * h;
  r.err = std::fabs((k15 - g7) * h);
  return r;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
             int max_depth) {
  const PanelResult r = panel(f, a, b);
  if (r.err <= tol || depth >= max_depth) return r.k15;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
  if (!(b > a)) return 0.0;
  return adapt(f, a, b, abs_tol, 0, max_depth);
}

}  // namespace nschwet
