#include "nschwet/linsolve.hpp"

#include <cmath>

#include "nschwet/kernels.hpp"

namespace nschwet {

CosineBasisY CosineBasisY::make(int ny, double dy) {
  CosineBasisY b;
  b.n = ny;
  b.q.assign(size_t(ny) * ny, 0.0);
  b.qt.assign(size_t(ny) * ny, 0.0);
  b.lambda.assign(ny, 0.0);
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < ny; ++k) {
    const double s = std::sin(0.5 * k * pi / ny);
    b.lambda[k] = 4.0 * s * s / (dy * dy);
    const double norm = std::sqrt((k == 0 ? 1.0 : 2.0) / ny);
    for (int j = 0; j < ny; ++j) {
      const double v = norm * std::cos(k * pi * (j + 0.5) / ny);
      b.q[size_t(j) * ny + k] = v;
      b.qt[size_t(k) * ny + j] = v;
    }
  }
  return b;
}

void CosineBasisY::forward(const double* in, double* out, int rows) const {
  kern::matmul(in, n, q.data(), n, out, n, rows, n, n);
}

void CosineBasisY::inverse(const double* in, double* out, int rows) const {
  kern::matmul(in, n, qt.data(), n, out, n, rows, n, n);
}

XLaplacian XLaplacian::make(const StaggeredGrid& g) {
  XLaplacian x;
  const int n = g.nx;
  x.n = n;
  x.lo.assign(n, 0.0);
  x.di.assign(n, 0.0);
  x.up.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double w = g.dx[i];
    const double cw = (i > 0) ? 1.0 / (g.dxc[i] * w) : 0.0;      // mirror: flux 0
    const double ce = (i < n - 1) ? 1.0 / (g.dxc[i + 1] * w) : 0.0;
    x.lo[i] = cw;
    x.up[i] = ce;
    x.di[i] = -(cw + ce);
  }
  // pentadiagonal bands of Dxx*Dxx
  x.s2m.assign(n, 0.0);
  x.s1m.assign(n, 0.0);
  x.sd.assign(n, 0.0);
  x.s1p.assign(n, 0.0);
  x.s2p.assign(n, 0.0);
  auto lo = [&](int i) { return (i >= 0 && i < n) ? x.lo[i] : 0.0; };
  auto di = [&](int i) { return (i >= 0 && i < n) ? x.di[i] : 0.0; };
  auto up = [&](int i) { return (i >= 0 && i < n) ? x.up[i] : 0.0; };
  for (int i = 0; i < n; ++i) {
    x.s2m[i] = lo(i) * lo(i - 1);
    x.s1m[i] = lo(i) * di(i - 1) + di(i) * lo(i);
    x.sd[i] = lo(i) * up(i - 1) + di(i) * di(i) + up(i) * lo(i + 1);
    x.s1p[i] = di(i) * up(i) + up(i) * di(i + 1);
    x.s2p[i] = up(i) * up(i + 1);
  }
  return x;
}

void XLaplacian::apply(const double* v, double* y) const {
  for (int i = 0; i < n; ++i) {
    double s = di[i] * v[i];
    if (i > 0) s += lo[i] * v[i - 1];
    if (i < n - 1) s += up[i] * v[i + 1];
    y[i] = s;
  }
}

void TriBatch::factor(const std::vector<double>& a, const std::vector<double>& b,
                      const std::vector<double>& c, int n_, int lanes_) {
  n = n_;
  lanes = lanes_;
  const size_t sz = size_t(n) * lanes;
  l1.assign(sz, 0.0);
  invd.assign(sz, 0.0);
  u1.assign(sz, 0.0);
  std::vector<double> d(sz);
  for (int l = 0; l < lanes; ++l) d[l] = b[l];
  for (int l = 0; l < lanes; ++l) u1[l] = c[l];
  for (int i = 1; i < n; ++i) {
    for (int l = 0; l < lanes; ++l) {
      const size_t k = size_t(i) * lanes + l, km = k - lanes;
      const double m = a[k] / d[km];
      l1[k] = m;
      d[k] = b[k] - m * u1[km];
      u1[k] = c[k];
    }
  }
  for (size_t k = 0; k < sz; ++k) invd[k] = 1.0 / d[k];
}

void TriBatch::solve(double* rhs) const {
  kern::trisolve_batched(l1.data(), invd.data(), u1.data(), rhs, n, lanes);
}

void PentaBatch::factor(const std::vector<double>& a2, const std::vector<double>& a1,
                        const std::vector<double>& b, const std::vector<double>& c1,
                        const std::vector<double>& c2, int n_, int lanes_) {
  n = n_;
  lanes = lanes_;
  const size_t sz = size_t(n) * lanes;
  l2.assign(sz, 0.0);
  l1.assign(sz, 0.0);
  invd.assign(sz, 0.0);
  u1.assign(sz, 0.0);
  u2.assign(sz, 0.0);
  std::vector<double> d(sz);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < lanes; ++l) {
      const size_t k = size_t(i) * lanes + l;
      const size_t k1 = k - lanes, k2 = k - 2 * size_t(lanes);
      double m2 = 0.0, m1 = 0.0;
      if (i >= 2) m2 = a2[k] / d[k2];
      if (i >= 1) m1 = (a1[k] - (i >= 2 ? m2 * u1[k2] : 0.0)) / d[k1];
      l2[k] = m2;
      l1[k] = m1;
      d[k] = b[k] - (i >= 1 ? m1 * u1[k1] : 0.0) - (i >= 2 ? m2 * u2[k2] : 0.0);
      u1[k] = c1[k] - (i >= 1 ? m1 * u2[k1] : 0.0);
      u2[k] = c2[k];
    }
  }
  for (size_t k = 0; k < sz; ++k) invd[k] = 1.0 / d[k];
}

void PentaBatch::solve(double* rhs) const {
  kern::pentasolve_batched(l2.data(), l1.data(), invd.data(), u1.data(), u2.data(), rhs, n,
                           lanes);
}

// ---------------------------------------------------------------- krylov ---

KrylovResult bicgstab(const LinOp& a, const double* b, double* x, std::ptrdiff_t n,
                      double rel_tol, int max_iters, const LinOp& precond, double abs_tol) {
  std::vector<double> r(n), r0(n), pv(n), v(n), s(n), t(n), ph(n), sh(n);
  const double bnorm = std::sqrt(kern::nrm2sq(b, n));
  const double target = std::max(rel_tol * bnorm, abs_tol);
  KrylovResult res;
  a(x, r.data());
  for (std::ptrdiff_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  kern::copy(r0.data(), r.data(), n);
  double rnorm = std::sqrt(kern::nrm2sq(r.data(), n));
  if (rnorm <= target || bnorm == 0.0) {
    res.converged = true;
    res.rel_residual = bnorm > 0 ? rnorm / bnorm : 0.0;
    return res;
  }
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  kern::fill(pv.data(), 0.0, n);
  kern::fill(v.data(), 0.0, n);
  for (int it = 1; it <= max_iters; ++it) {
    const double rho1 = kern::dot(r0.data(), r.data(), n);
    if (rho1 == 0.0) break;
    if (it == 1) {
      kern::copy(pv.data(), r.data(), n);
    } else {
      const double beta = (rho1 / rho) * (alpha / omega);
      for (std::ptrdiff_t i = 0; i < n; ++i) pv[i] = r[i] + beta * (pv[i] - omega * v[i]);
    }
    rho = rho1;
    if (precond) precond(pv.data(), ph.data());
    else kern::copy(ph.data(), pv.data(), n);
    a(ph.data(), v.data());
    const double r0v = kern::dot(r0.data(), v.data(), n);
    if (r0v == 0.0) break;
    alpha = rho / r0v;
    kern::zaxpy(s.data(), r.data(), -alpha, v.data(), n);
    double snorm = std::sqrt(kern::nrm2sq(s.data(), n));
    if (snorm <= target) {
      kern::axpy(x, alpha, ph.data(), n);
      res.converged = true;
      res.iters = it;
      res.rel_residual = bnorm > 0 ? snorm / bnorm : 0.0;
      return res;
    }
    if (precond) precond(s.data(), sh.data());
    else kern::copy(sh.data(), s.data(), n);
    a(sh.data(), t.data());
    const double tt = kern::nrm2sq(t.data(), n);
    if (tt == 0.0) break;
    omega = kern::dot(t.data(), s.data(), n) / tt;
    for (std::ptrdiff_t i = 0; i < n; ++i) x[i] += alpha * ph[i] + omega * sh[i];
    kern::zaxpy(r.data(), s.data(), -omega, t.data(), n);
    rnorm = std::sqrt(kern::nrm2sq(r.data(), n));
    res.iters = it;
    if (rnorm <= target) {
      res.converged = true;
      res.rel_residual = bnorm > 0 ? rnorm / bnorm : 0.0;
      return res;
    }
    if (omega == 0.0) break;
  }
  res.converged = false;
  res.rel_residual = bnorm > 0 ? rnorm / bnorm : rnorm;
  return res;
}

KrylovResult pcg(const LinOp& a, const double* b, double* x, std::ptrdiff_t n, double rel_tol,
                 int max_iters, const LinOp& precond, double abs_tol) {
  std::vector<double> r(n), z(n), p(n), ap(n);
  const double bnorm = std::sqrt(kern::nrm2sq(b, n));
  const double target = std::max(rel_tol * bnorm, abs_tol);
  KrylovResult res;
  a(x, r.data());
  for (std::ptrdiff_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rnorm = std::sqrt(kern::nrm2sq(r.data(), n));
  if (rnorm <= target || bnorm == 0.0) {
    res.converged = true;
    res.rel_residual = bnorm > 0 ? rnorm / bnorm : 0.0;
    return res;
  }
  if (precond) precond(r.data(), z.data());
  else kern::copy(z.data(), r.data(), n);
  kern::copy(p.data(), z.data(), n);
  double rz = kern::dot(r.data(), z.data(), n);
  for (int it = 1; it <= max_iters; ++it) {
    a(p.data(), ap.data());
    const double pap = kern::dot(p.data(), ap.data(), n);
    if (pap == 0.0) break;
    const double alpha = rz / pap;
    kern::axpy(x, alpha, p.data(), n);
    kern::axpy(r.data(), -alpha, ap.data(), n);
    rnorm = std::sqrt(kern::nrm2sq(r.data(), n));
    res.iters = it;
    if (rnorm <= target) {
      res.converged = true;
      res.rel_residual = bnorm > 0 ? rnorm / bnorm : 0.0;
      return res;
    }
    if (precond) precond(r.data(), z.data());
    else kern::copy(z.data(), r.data(), n);
    const double rz1 = kern::dot(r.data(), z.data(), n);
    const double beta = rz1 / rz;
    rz = rz1;
    for (std::ptrdiff_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.converged = false;
  res.rel_residual = bnorm > 0 ? rnorm / bnorm : rnorm;
  return res;
}

}  // namespace nschwet
