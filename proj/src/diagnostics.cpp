#include "nschwet/diagnostics.hpp"

#include <cmath>
#include <cstdio>

#include "nschwet/navierstokes.hpp"

namespace nschwet {

double energy(const StaggeredGrid& g, const State& s, const MaterialLaws& laws, double eps) {
  const int nx = g.nx, ny = g.ny;
  const double sigma = laws.sigma();
  double egrad = 0.0;
  for (int i = 1; i < nx; ++i) {
    double col = 0.0;
    for (int j = 0; j < ny; ++j) {
      const double d = s.phi.at(i, j) - s.phi.at(i - 1, j);
      col += d * d;
    }
    egrad += col / g.dxc[i] * g.dy;
  }
  for (int i = 0; i < nx; ++i) {
    double col = 0.0;
    for (int j = 1; j < ny; ++j) {
      const double d = s.phi.at(i, j) - s.phi.at(i, j - 1);
      col += d * d;
    }
    egrad += col / g.dy * g.dx[i];
  }
  double epot = 0.0, ekin = 0.0;
  for (int i = 0; i < nx; ++i) {
    double colp = 0.0, colk = 0.0;
    for (int j = 0; j < ny; ++j) {
      colp += MaterialLaws::psi(s.phi.at(i, j));
      const double u2 = 0.5 * (s.u.at(i, j) * s.u.at(i, j) + s.u.at(i + 1, j) * s.u.at(i + 1, j));
      const double v2 = 0.5 * (s.v.at(i, j) * s.v.at(i, j) + s.v.at(i, j + 1) * s.v.at(i, j + 1));
      colk += 0.5 * laws.rho(s.phi.at(i, j)) * (u2 + v2);
    }
    epot += colp * g.dx[i];
    ekin += colk * g.dx[i];
  }
  double ewall = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double trb = 0.5 * (s.phi.at(i, 0) + s.phi.at(i, -1));
    const double trt = 0.5 * (s.phi.at(i, ny - 1) + s.phi.at(i, ny));
    ewall += (laws.sigma_sf(trb) + laws.sigma_sf(trt)) * g.dx[i];
  }
  return 0.5 * sigma * eps * egrad + sigma / eps * epot * g.dy + ekin * g.dy + ewall;
}

namespace {

struct WallTrace {
  double phi = 0.0;    // wall value of phi
  double dxphi = 0.0;  // tangential derivative of the wall trace
  double dyphi = 0.0;  // one-sided normal-coordinate derivative
};

WallTrace wall_trace(const StaggeredGrid& g, const Field& phi, int i, bool bottom) {
  const int row = bottom ? 0 : g.ny - 1;
  const int gho = bottom ? -1 : g.ny;
  auto tr = [&](int c) { return 0.5 * (phi.at(c, row) + phi.at(c, gho)); };
  const double xm = (i > 0) ? g.xc[i - 1] : -g.xc[0];
  const double xp = (i < g.nx - 1) ? g.xc[i + 1] : 2.0 * g.lx - g.xc[g.nx - 1];
  WallTrace w;
  w.phi = tr(i);
  w.dxphi = (tr(i + 1) - tr(i - 1)) / (xp - xm);
  w.dyphi = (phi.at(i, gho) - phi.at(i, row)) / g.dy * (bottom ? -1.0 : 1.0);
  return w;
}

double wall_dyu(const StaggeredGrid& g, const Field& u, int i, bool bottom) {
  const int ny = g.ny;
  auto face = [&](int f) {
    return bottom ? (u.at(f, 0) - u.at(f, -1)) / g.dy : (u.at(f, ny) - u.at(f, ny - 1)) / g.dy;
  };
  return 0.5 * (face(i) + face(i + 1));
}

double wall_u(const StaggeredGrid& g, const Field& u, int i, bool bottom) {
  const int ny = g.ny;
  auto face = [&](int f) {
    return bottom ? 0.5 * (u.at(f, 0) + u.at(f, -1)) : 0.5 * (u.at(f, ny - 1) + u.at(f, ny));
  };
  return 0.5 * (face(i) + face(i + 1));
}

}  // namespace

BudgetTerms dissipation_budget(const StaggeredGrid& g, const State& before, const State& after,
                               double dt, const MaterialLaws& laws, const WettingModel& wetting,
                               const ChannelSpec& ch, double eps, double mobility,
                               bool closed_box) {
  const int nx = g.nx, ny = g.ny;
  BudgetTerms b;
  b.dEdt = (energy(g, after, laws, eps) - energy(g, before, laws, eps)) / dt;

  // int m |grad mu|^2 over interior faces (zero-flux boundaries)
  double dmu = 0.0;
  for (int i = 1; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double d = (after.mu.at(i, j) - after.mu.at(i - 1, j)) / g.dxc[i];
      dmu += d * d * g.dxc[i] * g.dy;
    }
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < ny; ++j) {
      const double d = (after.mu.at(i, j) - after.mu.at(i, j - 1)) / g.dy;
      dmu += d * d * g.dx[i] * g.dy;
    }
  b.diffusion = mobility * dmu;

  // int grad u : tau with tau = eta (grad u + grad u^T)
  double dv = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double eta = laws.eta(after.phi.at(i, j));
      const double dudx = (after.u.at(i + 1, j) - after.u.at(i, j)) / g.dx[i];
      const double dvdy = (after.v.at(i, j + 1) - after.v.at(i, j)) / g.dy;
      dv += 2.0 * eta * (dudx * dudx + dvdy * dvdy) * g.vol(i);
    }
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) {
      double eta = 0.0;
      int cnt = 0;
      for (int ci : {i - 1, i})
        for (int cj : {j - 1, j}) {
          if (ci < 0 || ci >= nx || cj < 0 || cj >= ny) continue;
          eta += laws.eta(after.phi.at(ci, cj));
          ++cnt;
        }
      eta /= cnt;
      const double dudy = (after.u.at(i, j) - after.u.at(i, j - 1)) / g.dy;
      const double dvdx = (after.v.at(i, j) - after.v.at(i - 1, j)) / g.dxc[i];
      const double shear = dudy + dvdx;
      double w = g.dxc[i] * g.dy;
      if (j == 0 || j == ny) w *= 0.5;
      if (i == 0 || i == nx) w *= 0.5;
      dv += eta * shear * shear * w;
    }
  b.viscous = dv;

  // wall terms
  const double uw = closed_box ? 0.0 : wall_velocity(after.t, ch);
  const double se = laws.sigma() * eps;
  double wrelax = 0.0, wslip = 0.0, prod = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (bool bottom : {true, false}) {
      const WallTrace w = wall_trace(g, after.phi, i, bottom);
      const double dnphi = bottom ? -w.dyphi : w.dyphi;
      const double young = se * dnphi + laws.dsigma_sf(w.phi);
      if (!wetting.nu1.is_infinite()) wrelax += wetting.nu1.value() * young * young * g.dx[i];
      const double uwall = bottom ? uw : -uw;
      const double us = wall_u(g, after.u, i, bottom);
      if (wetting.nu2 > 0.0) {
        wslip += (us - uwall) * (us - uwall) / wetting.nu2 * g.dx[i];
        prod += uwall * (uwall - us) / wetting.nu2 * g.dx[i];
      } else if (uwall != 0.0) {
        // no-slip wall work from the tangential traction,
        // u_w . ((tau n + zeta n - p n)_S - grad_S sigma_SF)
        const double eta = laws.eta(w.phi);
        const double dyu = wall_dyu(g, after.u, i, bottom);
        const double young_force = young * w.dxphi;  // uncompensated Young stress
        const double tote = bottom ? (-eta * dyu - young_force) : (eta * dyu - young_force);
        prod += uwall * tote * g.dx[i];
      }
    }
  }
  b.wall_relax = wrelax;
  b.wall_slip = wslip;
  b.production = prod;

  // in-/outflow boundary work (traction + pressure + advected energy flux)
  double bnd = 0.0;
  if (!closed_box) {
    const double sigma = laws.sigma();
    for (int j = 0; j < ny; ++j) {
      for (bool left : {true, false}) {
        const int bi = left ? 0 : nx;
        const int ci = left ? 0 : nx - 1;
        const double sgn = left ? -1.0 : 1.0;  // exterior normal direction
        const double un = after.u.at(bi, j) * sgn;
        const double eta = laws.eta(after.phi.at(ci, j));
        const double dudx = left ? (after.u.at(1, j) - after.u.at(0, j)) / g.dx[0]
                                 : (after.u.at(nx, j) - after.u.at(nx - 1, j)) / g.dx[nx - 1];
        const double txx = 2.0 * eta * dudx;
        const double pb = after.p.at(ci, j);
        const double uval = after.u.at(bi, j);
        // kinetic + GL energy advected through the boundary
        const double phib = after.phi.at(ci, j);
        const double gphi2 = 0.0;  // pure phase at the ends; gradient negligible
        const double edens = 0.5 * laws.rho(phib) * uval * uval +
                             sigma / eps * MaterialLaws::psi(phib) +
                             0.5 * sigma * eps * gphi2;
        bnd += (uval * (txx * sgn - pb * sgn) - edens * un) * g.dy;
      }
    }
  }
  b.bnd_pm = bnd;
  b.residual = b.dEdt + b.diffusion + b.viscous + b.wall_relax + b.wall_slip - b.production -
               b.bnd_pm;
  return b;
}

ContactPoints contact_points(const StaggeredGrid& g, const Field& phi) {
  const int nx = g.nx, ny = g.ny;
  ContactPoints cp;
  auto find = [&](int r0, int r1, double& out) -> bool {
    int crossings = 0;
    for (int i = 0; i < nx - 1; ++i) {
      const double a = 1.5 * phi.at(i, r0) - 0.5 * phi.at(i, r1);
      const double b = 1.5 * phi.at(i + 1, r0) - 0.5 * phi.at(i + 1, r1);
      if (a == 0.0) {
        out = g.xc[i];
        ++crossings;
      } else if (a * b < 0.0) {
        out = g.xc[i] + a * (g.xc[i + 1] - g.xc[i]) / (a - b);
        ++crossings;
      }
    }
    return crossings == 1;
  };
  const bool okb = find(0, 1, cp.x_bottom);
  const bool okt = find(ny - 1, ny - 2, cp.x_top);
  cp.ok = okb && okt;
  return cp;
}

double midbox_angle(const StaggeredGrid& g, const Field& phi, const ChannelSpec& ch) {
  const double px = ch.interface_x0, py = ch.ell();
  const int nx = g.nx, ny = g.ny;
  // gradient at cell centers, bilinear interpolation to the mid-box point
  auto xce = [&](int i) {
    if (i < 0) return -g.xc[0];
    if (i >= nx) return 2.0 * g.lx - g.xc[nx - 1];
    return g.xc[i];
  };
  auto gx = [&](int i, int j) {
    return (phi.at(i + 1, j) - phi.at(i - 1, j)) / (xce(i + 1) - xce(i - 1));
  };
  auto gy = [&](int i, int j) { return (phi.at(i, j + 1) - phi.at(i, j - 1)) / (2.0 * g.dy); };
  int i0 = 0;
  while (i0 < nx - 2 && g.xc[i0 + 1] < px) ++i0;
  int j0 = 0;
  while (j0 < ny - 2 && g.yc[j0 + 1] < py) ++j0;
  const double tx = (px - g.xc[i0]) / (g.xc[i0 + 1] - g.xc[i0]);
  const double ty = (py - g.yc[j0]) / (g.yc[j0 + 1] - g.yc[j0]);
  auto blend = [&](auto f) {
    return (1 - tx) * (1 - ty) * f(i0, j0) + tx * (1 - ty) * f(i0 + 1, j0) +
           (1 - tx) * ty * f(i0, j0 + 1) + tx * ty * f(i0 + 1, j0 + 1);
  };
  const double gxa = blend(gx), gya = blend(gy);
  if (gxa == 0.0 && gya == 0.0) throw ConfigError("midbox_angle: vanishing phase-field gradient");
  return std::atan2(-gya, -gxa);
}

double shear_force_excess(const StaggeredGrid& g, const State& s, const MaterialLaws& laws,
                          const WettingModel& wetting, const ChannelSpec& ch, double eps,
                          double t, bool closed_box) {
  const int nx = g.nx;
  const double uw = closed_box ? 0.0 : wall_velocity(t, ch);
  const double ell = ch.ell();
  double fs = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (bool bottom : {true, false}) {
      const WallTrace w = wall_trace(g, s.phi, i, bottom);
      const double eta = laws.eta(w.phi);
      const double dyu = wall_dyu(g, s.u, i, bottom);
      const double zxy = laws.sigma() * eps * w.dxphi * w.dyphi;
      const double snu = wetting.nu2 * eta;
      const double base = eta * (-uw / (ell + snu));
      fs += (-eta * dyu + zxy + base) * g.dx[i];
    }
  }
  return fs;
}

std::string qoi_csv_header() {
  return "t,E,mass,dx_bottom,dx_top,theta_mid,F_S,div_max,budget_residual";
}

std::string qoi_csv_row(const QoiRecord& q) {
  char buf[400];
  std::snprintf(buf, sizeof(buf),
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", q.t, q.energy, q.mass,
                q.dx_bottom, q.dx_top, q.theta_mid, q.f_s, q.div_max, q.budget_residual);
  return buf;
}

}  // namespace nschwet
