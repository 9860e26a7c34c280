#include "nschwet/cahnhilliard.hpp"

#include <cmath>

#include "nschwet/kernels.hpp"

namespace nschwet {

void apply_pm_bc(Field& s) {
  for (int j = -1; j <= s.ny; ++j) {
    s.at(-1, j) = s.at(0, j);
    s.at(s.nx, j) = s.at(s.nx - 1, j);
  }
}

void apply_mu_bc(Field& mu) {
  for (int i = 0; i < mu.nx; ++i) {
    mu.at(i, -1) = mu.at(i, 0);
    mu.at(i, mu.ny) = mu.at(i, mu.ny - 1);
  }
  apply_pm_bc(mu);
}

void apply_wetting_bc_phi(Field& phi, const StaggeredGrid& g, const MaterialLaws&,
                          const ChCoeffs&, const std::vector<double>& gbot,
                          const std::vector<double>& gtop) {
  for (int i = 0; i < g.nx; ++i) {
    phi.at(i, -1) = phi.at(i, 0) - g.dy * gbot[i];
    phi.at(i, g.ny) = phi.at(i, g.ny - 1) - g.dy * gtop[i];
  }
  apply_pm_bc(phi);
}

double total_mass(const StaggeredGrid& g, const Field& phi) {
  double s = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    double col = 0.0;
    for (int j = 0; j < g.ny; ++j) col += phi.at(i, j);
    s += col * g.dx[i];
  }
  return s * g.dy;
}

ChStepper::ChStepper(const StaggeredGrid& g, const CosineBasisY& basis)
    : g_(&g), basis_(&basis) {
  xlap_ = XLaplacian::make(g);
  const size_t n = size_t(g.nx) * g.ny;
  for (auto& w : wk_) w.assign(n, 0.0);
}

void ChStepper::prepare(const ChCoeffs& c) {
  if (factored_ && c.dt == cached_.dt && c.m == cached_.m && c.eps == cached_.eps &&
      c.sigma == cached_.sigma && c.stab_s == cached_.stab_s)
    return;
  const int nx = g_->nx, ny = g_->ny;
  const double c1 = c.m * c.sigma * c.stab_s / c.eps;
  const double c2 = c.m * c.sigma * c.eps;
  const size_t sz = size_t(nx) * ny;
  std::vector<double> a2(sz), a1(sz), b(sz), d1(sz), d2(sz);
  for (int i = 0; i < nx; ++i) {
    const double lo = xlap_.lo[i], di = xlap_.di[i], up = xlap_.up[i];
    for (int k = 0; k < ny; ++k) {
      const double lam = basis_->lambda[k];
      const size_t idx = size_t(i) * ny + k;
      a2[idx] = c2 * xlap_.s2m[i];
      a1[idx] = c2 * (xlap_.s1m[i] - 2.0 * lam * lo) - c1 * lo;
      b[idx] = 1.0 / c.dt - c1 * (di - lam) + c2 * (xlap_.sd[i] - 2.0 * lam * di + lam * lam);
      d1[idx] = c2 * (xlap_.s1p[i] - 2.0 * lam * up) - c1 * up;
      d2[idx] = c2 * xlap_.s2p[i];
    }
  }
  penta_.factor(a2, a1, b, d1, d2, nx, ny);
  cached_ = c;
  factored_ = true;
}

// homogeneous mirror Laplacian on a packed (nx x ny) array
void ChStepper::lap_mirror(const double* in, double* out) const {
  const int nx = g_->nx, ny = g_->ny;
  const double idy2 = 1.0 / (g_->dy * g_->dy);
  for (int i = 0; i < nx; ++i) {
    const double lo = xlap_.lo[i], di = xlap_.di[i], up = xlap_.up[i];
    const double* row = in + size_t(i) * ny;
    const double* rm = (i > 0) ? row - ny : row;
    const double* rp = (i < nx - 1) ? row + ny : row;
    double* o = out + size_t(i) * ny;
    for (int j = 0; j < ny; ++j) {
      const double yn = (j > 0) ? row[j - 1] : row[0];
      const double yp = (j < ny - 1) ? row[j + 1] : row[ny - 1];
      o[j] = lo * rm[j] + di * row[j] + up * rp[j] + (yn - 2.0 * row[j] + yp) * idy2;
    }
  }
}

void ChStepper::wall_flux(const Field& phi, const Field& u, const MaterialLaws& laws,
                          const WettingModel& wetting, const ChCoeffs& c,
                          std::vector<double>& gbot, std::vector<double>& gtop) {
  const int nx = g_->nx, ny = g_->ny;
  const double se = c.sigma * c.eps;
  gbot.assign(nx, 0.0);
  gtop.assign(nx, 0.0);
  if (wetting.nu1.is_infinite()) {
    // equilibrium Robin condition, wall value lagged to the adjacent cell
    for (int i = 0; i < nx; ++i) {
      gbot[i] = laws.dsigma_sf(phi.at(i, 0)) / se;
      gtop[i] = laws.dsigma_sf(phi.at(i, ny - 1)) / se;
    }
    return;
  }
  // Finite nu1: advance the wall trace psi explicitly,
  //   d_t psi + u_S d_x psi = -nu1 (sigma eps dn phi + sigma'_SF(psi)),
  // and feed the ghost the flux implied by the dynamic condition,
  //   sigma eps dn phi^{n+1} = -sigma'_SF(psi^{n+1}) + young^n.
  const double nu1 = wetting.nu1.value();
  if (!have_trace_) {
    trace_bot.assign(nx, 0.0);
    trace_top.assign(nx, 0.0);
    for (int i = 0; i < nx; ++i) {
      trace_bot[i] = 1.5 * phi.at(i, 0) - 0.5 * phi.at(i, 1);
      trace_top[i] = 1.5 * phi.at(i, ny - 1) - 0.5 * phi.at(i, ny - 2);
    }
    have_trace_ = true;
  }
  auto wall_pass = [&](std::vector<double>& tr, std::vector<double>& gfl, int jrow) {
    std::vector<double> next(nx);
    for (int i = 0; i < nx; ++i) {
      const double us = 0.5 * (u.at(i, jrow) + u.at(i + 1, jrow));
      const int im = (i > 0) ? i - 1 : i, ip = (i < nx - 1) ? i + 1 : i;
      const double dpsi_dx = (tr[ip] - tr[im]) / (g_->xc[ip] - g_->xc[im]);
      const double dphi_dn = (tr[i] - phi.at(i, jrow)) / (0.5 * g_->dy);
      const double young = se * dphi_dn + laws.dsigma_sf(tr[i]);
      next[i] = tr[i] + c.dt * (-us * dpsi_dx - nu1 * young);
      gfl[i] = (laws.dsigma_sf(next[i]) - young) / se;
    }
    tr = next;
  };
  wall_pass(trace_bot, gbot, 0);
  wall_pass(trace_top, gtop, ny - 1);
}

void ChStepper::step(State& s, const MaterialLaws& laws, const WettingModel& wetting,
                     const ChCoeffs& c) {
  prepare(c);
  const int nx = g_->nx, ny = g_->ny;
  const size_t n = size_t(nx) * ny;
  Field& phi = s.phi;
  Field& mu = s.mu;

  std::vector<double> gbot, gtop;
  wall_flux(phi, s.u, laws, wetting, c, gbot, gtop);
  apply_wetting_bc_phi(phi, *g_, laws, c, gbot, gtop);

  // rhs_phi = phi^n/dt - div(phi^n u^n), flux form with second-order upwind
  // donor reconstruction (first order at the end faces, pure phase there)
  std::vector<double>& rhs = wk_[0];
  {
    const Field& u = s.u;
    const Field& v = s.v;
    auto xce = [&](int i) {
      if (i < 0) return -g_->xc[0];
      if (i >= nx) return 2.0 * g_->lx - g_->xc[nx - 1];
      return g_->xc[i];
    };
    auto slope_x = [&](int i, int j) -> double {
      if (i <= 0 || i >= nx - 1) return 0.0;
      return (phi.at(i + 1, j) - phi.at(i - 1, j)) / (xce(i + 1) - xce(i - 1));
    };
    auto slope_y = [&](int i, int j) -> double {
      return (phi.at(i, j + 1) - phi.at(i, j - 1)) / (2.0 * g_->dy);
    };
    std::vector<double> fx(size_t(nx + 1) * ny), fy(size_t(nx) * (ny + 1), 0.0);
    for (int i = 0; i <= nx; ++i) {
      const double xf = g_->xf[i];
      for (int j = 0; j < ny; ++j) {
        const double uu = u.at(i, j);
        double ph;
        if (uu >= 0.0)
          ph = phi.at(i - 1, j) + slope_x(i - 1, j) * (xf - xce(i - 1));
        else
          ph = phi.at(i, j) + slope_x(i, j) * (xf - xce(i));
        fx[size_t(i) * ny + j] = uu * ph;
      }
    }
    for (int i = 0; i < nx; ++i)
      for (int j = 1; j < ny; ++j) {  // wall faces carry zero normal velocity
        const double vv = v.at(i, j);
        double ph;
        if (vv >= 0.0)
          ph = phi.at(i, j - 1) + slope_y(i, j - 1) * (0.5 * g_->dy);
        else
          ph = phi.at(i, j) - slope_y(i, j) * (0.5 * g_->dy);
        fy[size_t(i) * (ny + 1) + j] = vv * ph;
      }
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        const double div =
            (fx[size_t(i + 1) * ny + j] - fx[size_t(i) * ny + j]) / g_->dx[i] +
            (fy[size_t(i) * (ny + 1) + j + 1] - fy[size_t(i) * (ny + 1) + j]) / g_->dy;
        rhs[size_t(i) * ny + j] = phi.at(i, j) / c.dt - div;
      }
  }

  // b_mu_tilde = (sigma/eps)(Psi'(phi^n) - S phi^n) + sigma*eps*g/dy at walls
  std::vector<double>& bmu = wk_[1];
  const double soe = c.sigma / c.eps;
  const double se = c.sigma * c.eps;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double p = phi.at(i, j);
      double val = soe * (MaterialLaws::dpsi(p) - c.stab_s * p);
      if (j == 0) val += se * gbot[i] / g_->dy;
      if (j == ny - 1) val += se * gtop[i] / g_->dy;
      bmu[size_t(i) * ny + j] = val;
    }

  // Schur right-hand side R = rhs_phi + m * Lap(b_mu_tilde)
  std::vector<double>& lapb = wk_[2];
  lap_mirror(bmu.data(), lapb.data());
  std::vector<double>& schur = wk_[3];
  kern::copy(schur.data(), rhs.data(), n);
  kern::axpy(schur.data(), c.m, lapb.data(), n);

  // per-mode pentadiagonal solve
  std::vector<double>& rhat = wk_[4];
  basis_->forward(schur.data(), rhat.data(), nx);
  penta_.solve(rhat.data());
  std::vector<double>& phinew = wk_[5];
  basis_->inverse(rhat.data(), phinew.data(), nx);

  // mu = b_mu_tilde - sigma*eps*Lap(phi) + (sigma S/eps) phi
  std::vector<double> lapphi(n), munew(n);
  lap_mirror(phinew.data(), lapphi.data());
  for (size_t k = 0; k < n; ++k)
    munew[k] = bmu[k] - se * lapphi[k] + soe * c.stab_s * phinew[k];

  // verify the coupled residual (the separable solve is exact to roundoff)
  {
    std::vector<double> lapmu(n);
    lap_mirror(munew.data(), lapmu.data());
    double r2 = 0.0, b2 = 0.0;
    for (size_t k = 0; k < n; ++k) {
      const double res = phinew[k] / c.dt - c.m * lapmu[k] - rhs[k];
      r2 += res * res;
      b2 += rhs[k] * rhs[k];
    }
    last_residual = b2 > 0 ? std::sqrt(r2 / b2) : std::sqrt(r2);
    if (b2 > 0 && !(last_residual <= std::max(c.lin_tol, 1e-11)))
      throw SolverFailure("cahn-hilliard residual " + std::to_string(last_residual));
  }

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      phi.at(i, j) = phinew[size_t(i) * ny + j];
      mu.at(i, j) = munew[size_t(i) * ny + j];
    }
  apply_wetting_bc_phi(phi, *g_, laws, c, gbot, gtop);
  apply_mu_bc(mu);
}

}  // namespace nschwet
