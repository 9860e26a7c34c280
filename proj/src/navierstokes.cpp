#include "nschwet/navierstokes.hpp"

#include <cassert>
#include <cmath>

#include "nschwet/kernels.hpp"

namespace nschwet {

double wall_velocity(double t, const ChannelSpec& ch) {
  if (t <= 0.0) return 0.0;
  if (t < ch.ramp_time)
    return (0.5 - 0.5 * std::cos(3.14159265358979323846 * t / ch.ramp_time)) * ch.u_wall_max;
  return ch.u_wall_max;
}

double inflow_profile(double x2, double t, const ChannelSpec& ch, double s_nu) {
  const double ell = ch.ell();
  return wall_velocity(t, ch) * (1.0 - x2 / ell) * ell / (ell + s_nu);
}

double gnbc_ghost_value(double u_interior, double u_wall, double nu2, double eta_wall,
                        double young, double dy) {
  const double b = nu2 * eta_wall / dy;
  return (u_wall + nu2 * young + u_interior * (b - 0.5)) / (0.5 + b);
}

NsStepper::NsStepper(const StaggeredGrid& g, const CosineBasisY& basis)
    : g_(&g), basis_(&basis) {
  xlap_ = XLaplacian::make(g);
}

NsStepper::GnbcArrays NsStepper::gnbc_terms(const Field& phi, const NsContext& ctx) const {
  const int nx = g_->nx, ny = g_->ny;
  const MaterialLaws& laws = *ctx.laws;
  const double se = laws.sigma() * ctx.eps;
  GnbcArrays a;
  a.eta_bot.assign(nx + 1, 0.0);
  a.eta_top.assign(nx + 1, 0.0);
  a.young_bot.assign(nx + 1, 0.0);
  a.young_top.assign(nx + 1, 0.0);
  auto trace_b = [&](int c) { return 0.5 * (phi.at(c, 0) + phi.at(c, -1)); };
  auto trace_t = [&](int c) { return 0.5 * (phi.at(c, ny - 1) + phi.at(c, ny)); };
  for (int i = 0; i <= nx; ++i) {
    {
      const double dphidx = (trace_b(i) - trace_b(i - 1)) / g_->dxc[i];
      const double dyb0 = (phi.at(i - 1, 0) - phi.at(i - 1, -1)) / g_->dy;
      const double dyb1 = (phi.at(i, 0) - phi.at(i, -1)) / g_->dy;
      const double dnphi = -0.5 * (dyb0 + dyb1);  // exterior normal -y
      const double trf = 0.5 * (trace_b(i - 1) + trace_b(i));
      a.eta_bot[i] = laws.eta(trf);
      a.young_bot[i] = (se * dnphi + laws.dsigma_sf(trf)) * dphidx;
    }
    {
      const double dphidx = (trace_t(i) - trace_t(i - 1)) / g_->dxc[i];
      const double dyt0 = (phi.at(i - 1, ny) - phi.at(i - 1, ny - 1)) / g_->dy;
      const double dyt1 = (phi.at(i, ny) - phi.at(i, ny - 1)) / g_->dy;
      const double dnphi = 0.5 * (dyt0 + dyt1);  // exterior normal +y
      const double trf = 0.5 * (trace_t(i - 1) + trace_t(i));
      a.eta_top[i] = laws.eta(trf);
      a.young_top[i] = (se * dnphi + laws.dsigma_sf(trf)) * dphidx;
    }
  }
  return a;
}

void NsStepper::fill_p_ghosts(Field& p) {
  for (int i = 0; i < p.nx; ++i) {
    p.at(i, -1) = p.at(i, 0);
    p.at(i, p.ny) = p.at(i, p.ny - 1);
  }
  for (int j = -1; j <= p.ny; ++j) {
    p.at(-1, j) = p.at(0, j);
    p.at(p.nx, j) = p.at(p.nx - 1, j);
  }
}

void NsStepper::fill_velocity_ghosts(State& s, const NsContext& ctx, double t) const {
  const int nx = g_->nx, ny = g_->ny;
  Field& u = s.u;
  Field& v = s.v;
  const ChannelSpec& ch = *ctx.channel;

  // channel ends: Dirichlet Couette profile (or stationary walls when closed)
  if (ctx.closed_box) {
    for (int j = 0; j < ny; ++j) {
      u.at(0, j) = 0.0;
      u.at(nx, j) = 0.0;
    }
  } else {
    double phibar_l = 0.0, phibar_r = 0.0;
    for (int j = 0; j < ny; ++j) {
      phibar_l += s.phi.at(0, j);
      phibar_r += s.phi.at(nx - 1, j);
    }
    const double eta_l = ctx.laws->eta(phibar_l / ny);
    const double eta_r = ctx.laws->eta(phibar_r / ny);
    const double snu_l = ctx.wetting->nu2 * eta_l;
    const double snu_r = ctx.wetting->nu2 * eta_r;
    for (int j = 0; j < ny; ++j) {
      u.at(0, j) = inflow_profile(g_->yc[j], t, ch, snu_l);
      u.at(nx, j) = inflow_profile(g_->yc[j], t, ch, snu_r);
    }
  }
  // ghost columns for the convection stencils
  for (int j = 0; j < ny; ++j) {
    if (ctx.closed_box) {
      u.at(-1, j) = -u.at(1, j);
      u.at(nx + 1, j) = -u.at(nx - 1, j);
    } else {
      u.at(-1, j) = 2.0 * u.at(0, j) - u.at(1, j);
      u.at(nx + 1, j) = 2.0 * u.at(nx, j) - u.at(nx - 1, j);
    }
  }

  // impermeable walls and reflected v ghosts
  for (int i = 0; i < nx; ++i) {
    v.at(i, 0) = 0.0;
    v.at(i, ny) = 0.0;
    v.at(i, -1) = -v.at(i, 1);
    v.at(i, ny + 1) = -v.at(i, ny - 1);
  }
  for (int j = -1; j <= ny + 1; ++j) {
    v.at(-1, j) = -v.at(0, j);
    v.at(nx, j) = -v.at(nx - 1, j);
  }

  // GNBC ghost rows for u
  const GnbcArrays ga = gnbc_terms(s.phi, ctx);
  const double uw = ctx.closed_box ? 0.0 : wall_velocity(t, ch);
  const double nu2 = ctx.wetting->nu2;
  for (int i = 0; i <= nx; ++i) {
    u.at(i, -1) = gnbc_ghost_value(u.at(i, 0), uw, nu2, ga.eta_bot[i], ga.young_bot[i], g_->dy);
    u.at(i, ny) =
        gnbc_ghost_value(u.at(i, ny - 1), -uw, nu2, ga.eta_top[i], ga.young_top[i], g_->dy);
  }
}

void NsStepper::build_poisson_precond(double beta_bar) {
  if (poisson_beta_ == beta_bar) return;
  const int nx = g_->nx, ny = g_->ny;
  const size_t sz = size_t(nx) * ny;
  std::vector<double> a(sz, 0.0), b(sz, 0.0), c(sz, 0.0);
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < ny; ++k) {
      const size_t idx = size_t(i) * ny + k;
      a[idx] = -beta_bar * xlap_.lo[i];
      b[idx] = beta_bar * (basis_->lambda[k] - xlap_.di[i]);
      c[idx] = -beta_bar * xlap_.up[i];
      if (k == 0 && i == 0) {  // pin the constant mode
        b[idx] = 1.0;
        c[idx] = 0.0;
      }
      if (k == 0 && i == 1) a[idx] = 0.0;
    }
  poisson_.factor(a, b, c, nx, ny);
  poisson_beta_ = beta_bar;
}

void NsStepper::step(State& s, const Field& phi_old, const NsContext& ctx, const Coeffs& c) {
  const int nx = g_->nx, ny = g_->ny;
  const MaterialLaws& laws = *ctx.laws;
  const double dt = c.dt;
  const double tnew = s.t + dt;
  const Field& phi = s.phi;
  const Field& mu = s.mu;

  // --- material coefficient fields (ghost cells included) -----------------
  Field rho_new(Loc::center, *g_), rho_old(Loc::center, *g_), eta_cc(Loc::center, *g_);
  for (int i = -1; i <= nx; ++i)
    for (int j = -1; j <= ny; ++j) {
      rho_new.at(i, j) = laws.rho(phi.at(i, j));
      rho_old.at(i, j) = laws.rho(phi_old.at(i, j));
      eta_cc.at(i, j) = laws.eta(phi.at(i, j));
    }
  // viscosity at stress nodes
  std::vector<double> eta_n(size_t(nx + 1) * (ny + 1));
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      eta_n[size_t(i) * (ny + 1) + j] =
          0.25 * (eta_cc.at(i - 1, j - 1) + eta_cc.at(i, j - 1) + eta_cc.at(i - 1, j) +
                  eta_cc.at(i, j));

  const int nu_unk = (nx - 1) * ny;   // interior x-faces
  const int nv_unk = nx * (ny - 1);   // interior y-faces
  const int ntot = nu_unk + nv_unk;
  auto uidx = [&](int i, int j) { return (i - 1) * ny + j; };
  auto vidx = [&](int i, int j) { return nu_unk + i * (ny - 1) + (j - 1); };

  // GNBC Robin elimination coefficients from time-n fields
  const GnbcArrays ga = gnbc_terms(phi_old, ctx);
  const double uw = ctx.closed_box ? 0.0 : wall_velocity(tnew, *ctx.channel);
  const double nu2 = ctx.wetting->nu2;
  std::vector<double> c1b(nx + 1), c0b(nx + 1), c1t(nx + 1), c0t(nx + 1);
  for (int i = 0; i <= nx; ++i) {
    const double bb = nu2 * ga.eta_bot[i] / g_->dy;
    c1b[i] = (bb - 0.5) / (0.5 + bb);
    c0b[i] = (uw + nu2 * ga.young_bot[i]) / (0.5 + bb);
    const double bt = nu2 * ga.eta_top[i] / g_->dy;
    c1t[i] = (bt - 0.5) / (0.5 + bt);
    c0t[i] = (-uw + nu2 * ga.young_top[i]) / (0.5 + bt);
  }

  // scatter an unknown vector into padded fields with homogeneous BCs
  Field uf(Loc::xface, *g_), vf(Loc::yface, *g_);
  auto scatter = [&](const double* x, bool homogeneous) {
    uf.zero();
    vf.zero();
    if (x) {
      for (int i = 1; i < nx; ++i)
        for (int j = 0; j < ny; ++j) uf.at(i, j) = x[uidx(i, j)];
      for (int i = 0; i < nx; ++i)
        for (int j = 1; j < ny; ++j) vf.at(i, j) = x[vidx(i, j)];
    }
    if (!homogeneous) {
      if (!ctx.closed_box)
        for (int j = 0; j < ny; ++j) {
          // boundary data at t^{n+1}; local slip length from the end columns
          uf.at(0, j) = s.u.at(0, j);
          uf.at(nx, j) = s.u.at(nx, j);
        }
      for (int i = 0; i <= nx; ++i) {
        uf.at(i, -1) = c0b[i] + c1b[i] * uf.at(i, 0);
        uf.at(i, ny) = c0t[i] + c1t[i] * uf.at(i, ny - 1);
      }
    } else {
      for (int i = 0; i <= nx; ++i) {
        uf.at(i, -1) = c1b[i] * uf.at(i, 0);
        uf.at(i, ny) = c1t[i] * uf.at(i, ny - 1);
      }
    }
    // v ghosts: tangential Dirichlet 0 at the ends
    for (int j = 0; j <= ny; ++j) {
      vf.at(-1, j) = -vf.at(0, j);
      vf.at(nx, j) = -vf.at(nx - 1, j);
    }
  };

  // full viscous + mass operator on the scattered fields
  auto apply_tau = [&](double* out) {
    std::vector<double> txx(size_t(nx) * ny), tyy(size_t(nx) * ny);
    std::vector<double> txy(size_t(nx + 1) * (ny + 1));
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        txx[size_t(i) * ny + j] = 2.0 * eta_cc.at(i, j) * (uf.at(i + 1, j) - uf.at(i, j)) / g_->dx[i];
        tyy[size_t(i) * ny + j] = 2.0 * eta_cc.at(i, j) * (vf.at(i, j + 1) - vf.at(i, j)) / g_->dy;
      }
    for (int i = 0; i <= nx; ++i)
      for (int j = 0; j <= ny; ++j)
        txy[size_t(i) * (ny + 1) + j] =
            eta_n[size_t(i) * (ny + 1) + j] *
            ((uf.at(i, j) - uf.at(i, j - 1)) / g_->dy + (vf.at(i, j) - vf.at(i - 1, j)) / g_->dxc[i]);
    for (int i = 1; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        const double dtau = (txx[size_t(i) * ny + j] - txx[size_t(i - 1) * ny + j]) / g_->dxc[i] +
                            (txy[size_t(i) * (ny + 1) + j + 1] - txy[size_t(i) * (ny + 1) + j]) / g_->dy;
        out[uidx(i, j)] = -dtau;
      }
    for (int i = 0; i < nx; ++i)
      for (int j = 1; j < ny; ++j) {
        const double dtau =
            (txy[size_t(i + 1) * (ny + 1) + j] - txy[size_t(i) * (ny + 1) + j]) / g_->dx[i] +
            (tyy[size_t(i) * ny + j] - tyy[size_t(i) * ny + j - 1]) / g_->dy;
        out[vidx(i, j)] = -dtau;
      }
  };

  // face densities at n+1 (mass term) and the Jacobi diagonal
  std::vector<double> rfx(size_t(nx + 1) * ny), rfy(size_t(nx) * (ny + 1));
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < ny; ++j)
      rfx[size_t(i) * ny + j] = 0.5 * (rho_new.at(i - 1, j) + rho_new.at(i, j));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j <= ny; ++j)
      rfy[size_t(i) * (ny + 1) + j] = 0.5 * (rho_new.at(i, j - 1) + rho_new.at(i, j));

  LinOp vis_op = [&](const double* x, double* y) {
    scatter(x, true);
    apply_tau(y);
    for (int i = 1; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        y[uidx(i, j)] += rfx[size_t(i) * ny + j] / dt * x[uidx(i, j)];
    for (int i = 0; i < nx; ++i)
      for (int j = 1; j < ny; ++j)
        y[vidx(i, j)] += rfy[size_t(i) * (ny + 1) + j] / dt * x[vidx(i, j)];
  };

  std::vector<double> diag(ntot, 1.0);
  for (int i = 1; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double en0 = eta_n[size_t(i) * (ny + 1) + j];
      const double en1 = eta_n[size_t(i) * (ny + 1) + j + 1];
      double d = rfx[size_t(i) * ny + j] / dt +
                 2.0 * (eta_cc.at(i, j) / g_->dx[i] + eta_cc.at(i - 1, j) / g_->dx[i - 1]) / g_->dxc[i];
      double cyl = en0 / (g_->dy * g_->dy), cyh = en1 / (g_->dy * g_->dy);
      if (j == 0) cyl *= (1.0 - c1b[i]);
      if (j == ny - 1) cyh *= (1.0 - c1t[i]);
      d += cyl + cyh;
      diag[uidx(i, j)] = d;
    }
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < ny; ++j) {
      const double en0 = eta_n[size_t(i) * (ny + 1) + j];
      const double en1 = eta_n[size_t(i + 1) * (ny + 1) + j];
      double d = rfy[size_t(i) * (ny + 1) + j] / dt +
                 2.0 * (eta_cc.at(i, j) + eta_cc.at(i, j - 1)) / (g_->dy * g_->dy) +
                 (en0 / g_->dxc[i] + en1 / g_->dxc[i + 1]) / g_->dx[i];
      diag[vidx(i, j)] = d;
    }
  LinOp jacobi = [&](const double* x, double* y) {
    for (int k = 0; k < ntot; ++k) y[k] = x[k] / diag[k];
  };

  // --- explicit right-hand side -------------------------------------------
  std::vector<double> rhs(ntot, 0.0);
  const Field& u = s.u;
  const Field& v = s.v;
  auto xce = [&](int i) {
    if (i < 0) return -g_->xc[0];
    if (i >= nx) return 2.0 * g_->lx - g_->xc[nx - 1];
    return g_->xc[i];
  };
  auto xfe = [&](int i) {
    if (i < 0) return -g_->xf[1];
    if (i > nx) return 2.0 * g_->lx - g_->xf[nx - 1];
    return g_->xf[i];
  };

  // u momentum
  {
    // x flux of u momentum at cell centers, y flux at nodes
    std::vector<double> fxc(size_t(nx) * ny), fyn(size_t(nx + 1) * (ny + 1), 0.0);
    for (int cc = 0; cc < nx; ++cc)
      for (int j = 0; j < ny; ++j) {
        const double ubar = 0.5 * (u.at(cc, j) + u.at(cc + 1, j));
        double ut;
        if (ubar >= 0.0) {
          const double sl = (u.at(cc + 1, j) - u.at(cc - 1, j)) / (xfe(cc + 1) - xfe(cc - 1));
          ut = u.at(cc, j) + sl * (g_->xc[cc] - g_->xf[cc]);
        } else {
          const double sl = (u.at(cc + 2, j) - u.at(cc, j)) / (xfe(cc + 2) - xfe(cc));
          ut = u.at(cc + 1, j) + sl * (g_->xc[cc] - g_->xf[cc + 1]);
        }
        fxc[size_t(cc) * ny + j] = rho_old.at(cc, j) * ubar * ut;
      }
    for (int i = 0; i <= nx; ++i)
      for (int jn = 1; jn < ny; ++jn) {
        const double vn = 0.5 * (v.at(i - 1, jn) + v.at(i, jn));
        const double rn = 0.25 * (rho_old.at(i - 1, jn - 1) + rho_old.at(i, jn - 1) +
                                  rho_old.at(i - 1, jn) + rho_old.at(i, jn));
        double ut;
        if (vn >= 0.0) {
          const double sl = (u.at(i, jn) - u.at(i, jn - 2)) / (2.0 * g_->dy);
          ut = u.at(i, jn - 1) + sl * (0.5 * g_->dy);
        } else {
          const double sl = (u.at(i, jn + 1) - u.at(i, jn - 1)) / (2.0 * g_->dy);
          ut = u.at(i, jn) - sl * (0.5 * g_->dy);
        }
        fyn[size_t(i) * (ny + 1) + jn] = rn * vn * ut;
      }
    // relative-flux transport u (x) J
    std::vector<double> jx, jy;
    if (c.jflux_c != 0.0) {
      jx.assign(size_t(nx + 1) * ny, 0.0);
      jy.assign(size_t(nx) * (ny + 1), 0.0);
      for (int i = 1; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
          jx[size_t(i) * ny + j] = c.jflux_c * (mu.at(i, j) - mu.at(i - 1, j)) / g_->dxc[i];
      for (int i = 0; i < nx; ++i)
        for (int j = 1; j < ny; ++j)
          jy[size_t(i) * (ny + 1) + j] = c.jflux_c * (mu.at(i, j) - mu.at(i, j - 1)) / g_->dy;
    }
    for (int i = 1; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        double conv = (fxc[size_t(i) * ny + j] - fxc[size_t(i - 1) * ny + j]) / g_->dxc[i] +
                      (fyn[size_t(i) * (ny + 1) + j + 1] - fyn[size_t(i) * (ny + 1) + j]) / g_->dy;
        if (c.jflux_c != 0.0) {
          const double jxc_r = 0.5 * (jx[size_t(i) * ny + j] + jx[size_t(i + 1) * ny + j]);
          const double jxc_l = 0.5 * (jx[size_t(i - 1) * ny + j] + jx[size_t(i) * ny + j]);
          const double uc_r = 0.5 * (u.at(i, j) + u.at(i + 1, j));
          const double uc_l = 0.5 * (u.at(i - 1, j) + u.at(i, j));
          const double jyn_h = 0.5 * (jy[size_t(i - 1) * (ny + 1) + j + 1] + jy[size_t(i) * (ny + 1) + j + 1]);
          const double jyn_l = 0.5 * (jy[size_t(i - 1) * (ny + 1) + j] + jy[size_t(i) * (ny + 1) + j]);
          const double un_h = 0.5 * (u.at(i, j) + u.at(i, j + 1));
          const double un_l = 0.5 * (u.at(i, j - 1) + u.at(i, j));
          conv += (uc_r * jxc_r - uc_l * jxc_l) / g_->dxc[i] + (un_h * jyn_h - un_l * jyn_l) / g_->dy;
        }
        const double gradp = (s.p.at(i, j) - s.p.at(i - 1, j)) / g_->dxc[i];
        const double muf = 0.5 * (mu.at(i - 1, j) + mu.at(i, j));
        const double force = muf * (phi.at(i, j) - phi.at(i - 1, j)) / g_->dxc[i];
        rhs[uidx(i, j)] =
            0.5 * (rho_old.at(i - 1, j) + rho_old.at(i, j)) / dt * u.at(i, j) - conv - gradp + force;
      }
    // v momentum
    std::vector<double> fyc(size_t(nx) * ny), fxn(size_t(nx + 1) * (ny + 1), 0.0);
    for (int i = 0; i < nx; ++i)
      for (int cc = 0; cc < ny; ++cc) {
        const double vbar = 0.5 * (v.at(i, cc) + v.at(i, cc + 1));
        double vt;
        if (vbar >= 0.0) {
          const double sl = (v.at(i, cc + 1) - v.at(i, cc - 1)) / (2.0 * g_->dy);
          vt = v.at(i, cc) + sl * (0.5 * g_->dy);
        } else {
          const double sl = (v.at(i, cc + 2) - v.at(i, cc)) / (2.0 * g_->dy);
          vt = v.at(i, cc + 1) - sl * (0.5 * g_->dy);
        }
        fyc[size_t(i) * ny + cc] = rho_old.at(i, cc) * vbar * vt;
      }
    for (int in = 0; in <= nx; ++in)
      for (int j = 1; j < ny; ++j) {
        const double un = 0.5 * (u.at(in, j - 1) + u.at(in, j));
        const double rn = 0.25 * (rho_old.at(in - 1, j - 1) + rho_old.at(in, j - 1) +
                                  rho_old.at(in - 1, j) + rho_old.at(in, j));
        double vt;
        if (un >= 0.0) {
          const double sl =
              (in >= 1) ? (v.at(in, j) - v.at(in - 2, j)) / (xce(in) - xce(in - 2)) : 0.0;
          vt = v.at(in - 1, j) + sl * (g_->xf[in] - xce(in - 1));
        } else {
          const double sl =
              (in <= nx - 1) ? (v.at(in + 1, j) - v.at(in - 1, j)) / (xce(in + 1) - xce(in - 1))
                             : 0.0;
          vt = v.at(in, j) + sl * (g_->xf[in] - xce(in));
        }
        fxn[size_t(in) * (ny + 1) + j] = rn * un * vt;
      }
    for (int i = 0; i < nx; ++i)
      for (int j = 1; j < ny; ++j) {
        double conv = (fxn[size_t(i + 1) * (ny + 1) + j] - fxn[size_t(i) * (ny + 1) + j]) / g_->dx[i] +
                      (fyc[size_t(i) * ny + j] - fyc[size_t(i) * ny + j - 1]) / g_->dy;
        if (c.jflux_c != 0.0) {
          const double jyc_h = 0.5 * (jy[size_t(i) * (ny + 1) + j] + jy[size_t(i) * (ny + 1) + j + 1]);
          const double jyc_l = 0.5 * (jy[size_t(i) * (ny + 1) + j - 1] + jy[size_t(i) * (ny + 1) + j]);
          const double vc_h = 0.5 * (v.at(i, j) + v.at(i, j + 1));
          const double vc_l = 0.5 * (v.at(i, j - 1) + v.at(i, j));
          const double jxn_r = 0.5 * (jx[size_t(i + 1) * ny + j - 1] + jx[size_t(i + 1) * ny + j]);
          const double jxn_l = 0.5 * (jx[size_t(i) * ny + j - 1] + jx[size_t(i) * ny + j]);
          const double vn_r = 0.5 * (v.at(i, j) + v.at(i + 1, j));
          const double vn_l = 0.5 * (v.at(i - 1, j) + v.at(i, j));
          conv += (vn_r * jxn_r - vn_l * jxn_l) / g_->dx[i] + (vc_h * jyc_h - vc_l * jyc_l) / g_->dy;
        }
        const double gradp = (s.p.at(i, j) - s.p.at(i, j - 1)) / g_->dy;
        const double muf = 0.5 * (mu.at(i, j - 1) + mu.at(i, j));
        const double force = muf * (phi.at(i, j) - phi.at(i, j - 1)) / g_->dy;
        rhs[vidx(i, j)] =
            0.5 * (rho_old.at(i, j - 1) + rho_old.at(i, j)) / dt * v.at(i, j) - conv - gradp + force;
      }
  }

  // boundary-data contribution: rhs -= A(u_b, v_b)
  {
    // stage the t^{n+1} Dirichlet data in s.u (boundary faces only)
    if (!ctx.closed_box) {
      double phibar_l = 0.0, phibar_r = 0.0;
      for (int j = 0; j < ny; ++j) {
        phibar_l += phi.at(0, j);
        phibar_r += phi.at(nx - 1, j);
      }
      const double snu_l = nu2 * laws.eta(phibar_l / ny);
      const double snu_r = nu2 * laws.eta(phibar_r / ny);
      for (int j = 0; j < ny; ++j) {
        s.u.at(0, j) = inflow_profile(g_->yc[j], tnew, *ctx.channel, snu_l);
        s.u.at(nx, j) = inflow_profile(g_->yc[j], tnew, *ctx.channel, snu_r);
      }
    } else {
      for (int j = 0; j < ny; ++j) {
        s.u.at(0, j) = 0.0;
        s.u.at(nx, j) = 0.0;
      }
    }
    std::vector<double> ab(ntot);
    scatter(nullptr, false);
    apply_tau(ab.data());
    for (int k = 0; k < ntot; ++k) rhs[k] -= ab[k];
  }

  // --- implicit viscous solve ----------------------------------------------
  std::vector<double> x(ntot);
  for (int i = 1; i < nx; ++i)
    for (int j = 0; j < ny; ++j) x[uidx(i, j)] = u.at(i, j);
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < ny; ++j) x[vidx(i, j)] = v.at(i, j);
  KrylovResult vr = bicgstab(vis_op, rhs.data(), x.data(), ntot, c.lin_tol_v, 4000, jacobi);
  last_visc_iters = vr.iters;
  if (!vr.converged)
    throw SolverFailure("viscous solve stalled at relative residual " +
                        std::to_string(vr.rel_residual));

  // u*, v* into the state (boundary faces already hold t^{n+1} data)
  for (int i = 1; i < nx; ++i)
    for (int j = 0; j < ny; ++j) s.u.at(i, j) = x[uidx(i, j)];
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < ny; ++j) s.v.at(i, j) = x[vidx(i, j)];
  for (int i = 0; i < nx; ++i) {
    s.v.at(i, 0) = 0.0;
    s.v.at(i, ny) = 0.0;
  }

  // --- projection ----------------------------------------------------------
  const size_t ncell = size_t(nx) * ny;
  std::vector<double> bdiv(ncell), dp(ncell, 0.0);
  double bmean = 0.0, vol = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double d = (s.u.at(i + 1, j) - s.u.at(i, j)) / g_->dx[i] +
                       (s.v.at(i, j + 1) - s.v.at(i, j)) / g_->dy;
      bdiv[size_t(i) * ny + j] = -d / dt;
      bmean += d / dt * g_->vol(i);
      vol += g_->vol(i);
    }
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) bdiv[size_t(i) * ny + j] += bmean / vol;

  // face inverse densities
  std::vector<double> bfx(size_t(nx + 1) * ny, 0.0), bfy(size_t(nx) * (ny + 1), 0.0);
  double beta_sum = 0.0;
  for (int i = 1; i < nx; ++i)
    for (int j = 0; j < ny; ++j) bfx[size_t(i) * ny + j] = 1.0 / rfx[size_t(i) * ny + j];
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < ny; ++j) bfy[size_t(i) * (ny + 1) + j] = 1.0 / rfy[size_t(i) * (ny + 1) + j];
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) beta_sum += 1.0 / rho_new.at(i, j) * g_->vol(i);
  const double beta_bar = beta_sum / vol;
  build_poisson_precond(beta_bar);

  LinOp pop = [&](const double* xx, double* yy) {
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        const size_t k = size_t(i) * ny + j;
        double fxl = 0.0, fxr = 0.0, fyl = 0.0, fyh = 0.0;
        if (i > 0) fxl = bfx[size_t(i) * ny + j] * (xx[k] - xx[k - ny]) / g_->dxc[i];
        if (i < nx - 1) fxr = bfx[size_t(i + 1) * ny + j] * (xx[k + ny] - xx[k]) / g_->dxc[i + 1];
        if (j > 0) fyl = bfy[size_t(i) * (ny + 1) + j] * (xx[k] - xx[k - 1]) / g_->dy;
        if (j < ny - 1) fyh = bfy[size_t(i) * (ny + 1) + j + 1] * (xx[k + 1] - xx[k]) / g_->dy;
        yy[k] = -((fxr - fxl) / g_->dx[i] + (fyh - fyl) / g_->dy);
      }
  };
  std::vector<double> wk1(ncell), wk2(ncell);
  auto demean = [&](double* z) {
    double m = 0.0;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) m += z[size_t(i) * ny + j] * g_->vol(i);
    m /= vol;
    for (size_t k = 0; k < ncell; ++k) z[k] -= m;
  };
  LinOp pprec = [&](const double* xx, double* yy) {
    basis_->forward(xx, wk1.data(), nx);
    // transpose to lane-contiguous mode layout is already the case: wk1[i*ny+k]
    wk1[0] = 0.0;  // pinned row of the zero mode
    poisson_.solve(wk1.data());
    basis_->inverse(wk1.data(), yy, nx);
    demean(yy);
  };
  const double abs_tol = c.div_target > 0 ? 0.45 * c.div_target / dt : 0.0;
  KrylovResult pr = pcg(pop, bdiv.data(), dp.data(), ncell, c.lin_tol_p, 2000, pprec, abs_tol);
  last_p_iters = pr.iters;
  if (!pr.converged)
    throw SolverFailure("pressure solve stalled at relative residual " +
                        std::to_string(pr.rel_residual));
  demean(dp.data());

  for (int i = 1; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      s.u.at(i, j) -= dt * bfx[size_t(i) * ny + j] *
                      (dp[size_t(i) * ny + j] - dp[size_t(i - 1) * ny + j]) / g_->dxc[i];
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j < ny; ++j)
      s.v.at(i, j) -= dt * bfy[size_t(i) * (ny + 1) + j] *
                      (dp[size_t(i) * ny + j] - dp[size_t(i) * ny + j - 1]) / g_->dy;

  double pm = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) pm += (s.p.at(i, j) + dp[size_t(i) * ny + j]) * g_->vol(i);
  pm /= vol;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) s.p.at(i, j) += dp[size_t(i) * ny + j] - pm;
  fill_p_ghosts(s.p);

  // post-projection divergence
  double dmax = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      dmax = std::max(dmax, std::fabs((s.u.at(i + 1, j) - s.u.at(i, j)) / g_->dx[i] +
                                      (s.v.at(i, j + 1) - s.v.at(i, j)) / g_->dy));
  last_div_max = dmax;

#ifndef NDEBUG
  if (laws.matched_density()) assert(c.jflux_c == 0.0);
#endif

  fill_velocity_ghosts(s, ctx, tnew);
}

}  // namespace nschwet
