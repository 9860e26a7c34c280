#include <cmath>

#include "doctest.h"
#include "nschwet/diagnostics.hpp"
#include "test_support.hpp"

using namespace nschwet;
using namespace nschwet::testing;

namespace {

// one coupled step (CH then NS)
void coupled_step(Setup& su, ChStepper& ch, NsStepper& ns, State& s, double dt) {
  su.chc.dt = dt;
  Field phi_old = s.phi;
  ch.step(s, su.laws, su.cfg.wetting, su.chc);
  NsStepper::Coeffs nsc;
  nsc.dt = dt;
  nsc.lin_tol_v = 1e-12;
  nsc.lin_tol_p = 1e-12;
  nsc.div_target = 1e-10 * std::max(su.cfg.channel.u_wall_max, 1e-4) / su.cfg.channel.ell();
  ns.step(s, phi_old, su.ctx, nsc);
  s.t += dt;
}

State single_phase_state(const Setup& su) {
  State s = State::make(su.grid);
  for (auto& v : s.phi.a) v = 1.0;
  return s;
}

void set_couette_profile(const Setup& su, State& s, double t, double snu) {
  for (int i = -1; i <= su.grid.nx + 1; ++i)
    for (int j = 0; j < su.grid.ny; ++j)
      s.u.at(i, j) = inflow_profile(su.grid.yc[j], t, su.cfg.channel, snu);
}

double couette_deviation(const Setup& su, const State& s, double t, double snu) {
  double dev = 0.0;
  for (int i = 0; i <= su.grid.nx; ++i)
    for (int j = 0; j < su.grid.ny; ++j)
      dev = std::max(dev, std::fabs(s.u.at(i, j) -
                                    inflow_profile(su.grid.yc[j], t, su.cfg.channel, snu)));
  for (int i = 0; i < su.grid.nx; ++i)
    for (int j = 0; j <= su.grid.ny; ++j) dev = std::max(dev, std::fabs(s.v.at(i, j)));
  return dev;
}

}  // namespace

TEST_CASE("wall velocity ramp") {
  ChannelSpec ch;
  ch.u_wall_max = 4e-3;
  ch.ramp_time = 1.0;
  CHECK(wall_velocity(0.0, ch) == 0.0);
  CHECK(wall_velocity(0.5, ch) == doctest::Approx(2e-3).epsilon(1e-14));
  CHECK(wall_velocity(3.0, ch) == 4e-3);
  // C1 at the ends of the ramp
  const double h = 1e-6;
  CHECK((wall_velocity(h, ch) - wall_velocity(0.0, ch)) / h <= 1e-4);
  CHECK((wall_velocity(1.0, ch) - wall_velocity(1.0 - h, ch)) / h <= 1e-4);
}

TEST_CASE("inflow profile") {
  ChannelSpec ch;
  ch.u_wall_max = 4e-3;
  ch.ramp_time = 1.0;
  const double t = 5.0;  // plateau
  CHECK(inflow_profile(ch.ell(), t, ch, 1e-3) == doctest::Approx(0.0).scale(1.0));
  CHECK(inflow_profile(0.0, t, ch, 0.0) == doctest::Approx(4e-3).epsilon(1e-14));
  CHECK(inflow_profile(0.0, t, ch, 1e-3) ==
        doctest::Approx(4e-3 * 10.0 / 11.0).epsilon(1e-14));
  // odd about the centerline
  CHECK(inflow_profile(0.02, t, ch, 1e-3) ==
        doctest::Approx(-inflow_profile(0.0, t, ch, 1e-3)).epsilon(1e-14));
}

TEST_CASE("gnbc ghost value") {
  const double dy = 1e-3;
  // no-slip limit
  CHECK(gnbc_ghost_value(0.7, 0.2, 0.0, 0.1, 5.0, dy) ==
        doctest::Approx(2.0 * 0.2 - 0.7).epsilon(1e-14));
  // the returned ghost satisfies the Robin relation
  const double nu2 = 2e-2, eta = 0.1, young = 0.37, ui = 1.3, uw = 0.2;
  const double ug = gnbc_ghost_value(ui, uw, nu2, eta, young, dy);
  const double lhs = 0.5 * (ug + ui) - uw;
  const double rhs = nu2 * (eta * (ui - ug) / dy + young);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  // large nu2 with zero stress lets the wall value float to the interior value
  const double ug_free = gnbc_ghost_value(ui, uw, 1e9, eta, 0.0, dy);
  CHECK(0.5 * (ug_free + ui) == doctest::Approx(ui).epsilon(1e-6));
}

TEST_CASE("single-phase couette profiles are exact fixed points") {
  for (double nu2 : {0.0, 1e-2}) {
    CAPTURE(nu2);
    Setup su(48, 16, 0.2, 0.02, 4e-3, 4e-5, kPi / 2, nu2, 4e-3, 2e-3);
    NsStepper ns(su.grid, su.basis);
    ChStepper ch(su.grid, su.basis);
    State s = single_phase_state(su);
    const double snu = nu2 * su.cfg.fluids.eta_l;
    s.t = 10.0;  // past the ramp
    set_couette_profile(su, s, s.t, snu);
    ns.fill_velocity_ghosts(s, su.ctx, s.t);
    su.fill_phi_ghosts(ch, s);
    for (int k = 0; k < 5; ++k) coupled_step(su, ch, ns, s, 2e-3);
    CHECK(couette_deviation(su, s, s.t, snu) <= 1e-10 * su.cfg.channel.u_wall_max);
    CHECK(ns.last_div_max <= 1e-10 * su.cfg.channel.u_wall_max / su.cfg.channel.ell());
  }
}

TEST_CASE("single-phase couette converges from rest") {
  Setup su(32, 16, 0.2, 0.02, 4e-3, 4e-5, kPi / 2, 1e-2, 4e-3, 0.0);
  NsStepper ns(su.grid, su.basis);
  ChStepper ch(su.grid, su.basis);
  State s = single_phase_state(su);
  su.fill_phi_ghosts(ch, s);
  ns.fill_velocity_ghosts(s, su.ctx, 0.0);
  const double snu = 1e-2 * su.cfg.fluids.eta_l;
  const double dt = 5e-3;
  for (int k = 0; k < 1200; ++k) coupled_step(su, ch, ns, s, dt);
  CHECK(s.t == doctest::Approx(6.0));
  CHECK(couette_deviation(su, s, s.t, snu) <= 2e-5 * su.cfg.channel.u_wall_max);
}

TEST_CASE("flat equilibrium interface produces no spurious currents") {
  Setup su(64, 16, 0.2, 0.02, 6e-3, 4e-5, kPi / 2, 0.0, 0.0, 5e-4);
  NsStepper ns(su.grid, su.basis);
  ChStepper ch(su.grid, su.basis);
  State s = su.tanh_state();
  su.fill_phi_ghosts(ch, s);
  ns.fill_velocity_ghosts(s, su.ctx, 0.0);
  double umax = 0.0;
  for (int k = 0; k < 1000; ++k) {
    coupled_step(su, ch, ns, s, 5e-4);
    umax = std::max(umax, max_abs_interior(s.u));
    umax = std::max(umax, max_abs_interior(s.v));
  }
  const double scale = su.chc.sigma / su.cfg.fluids.eta_l;
  CHECK(umax <= 1e-8 * scale);
}

TEST_CASE("point symmetry of the equilibrating couette flow") {
  Setup su(48, 12, 0.2, 0.02, 6e-3, 4e-5, kPi / 2, 0.0, 4e-3, 1e-3);
  NsStepper ns(su.grid, su.basis);
  ChStepper ch(su.grid, su.basis);
  State s = su.tanh_state();
  su.fill_phi_ghosts(ch, s);
  ns.fill_velocity_ghosts(s, su.ctx, 0.0);
  for (int k = 0; k < 60; ++k) coupled_step(su, ch, ns, s, 1e-3);
  const int nx = su.grid.nx, ny = su.grid.ny;
  double dev_u = 0.0, dev_phi = 0.0;
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < ny; ++j)
      dev_u = std::max(dev_u, std::fabs(s.u.at(i, j) + s.u.at(nx - i, ny - 1 - j)));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      dev_phi = std::max(dev_phi, std::fabs(s.phi.at(i, j) + s.phi.at(nx - 1 - i, ny - 1 - j)));
  CHECK(dev_u <= 1e-6 * su.cfg.channel.u_wall_max);
  CHECK(dev_phi <= 1e-8);
}

TEST_CASE("capillary force assemblies agree to second order on divergence-free tests") {
  // <mu_gl grad phi - div zeta, w> -> 0 at O(h^2) for discretely solenoidal w
  auto misfit = [](int n) {
    const auto g = StaggeredGrid::uniform(n, n, 1.0, 1.0);
    const double sigma = 1.0, eps = 1.0;
    Field phi(Loc::center, g);
    auto fphi = [](double x, double y) {
      return 0.4 * std::sin(2 * kPi * x) * std::cos(2 * kPi * y);
    };
    auto xce = [&](int i) { return (i < 0) ? -g.xc[0] : (i >= g.nx ? 2.0 - g.xc[g.nx - 1] : g.xc[i]); };
    auto yce = [&](int j) { return (j < 0) ? -g.yc[0] : (j >= g.ny ? 2.0 - g.yc[g.ny - 1] : g.yc[j]); };
    for (int i = -1; i <= g.nx; ++i)
      for (int j = -1; j <= g.ny; ++j) phi.at(i, j) = fphi(xce(i), yce(j));

    // test function: discrete curl of a smooth stream function, interior support
    State w = State::make(g);
    auto psi = [](double x, double y) {
      const double sx = std::sin(kPi * x), sy = std::sin(kPi * y);
      return sx * sx * sy * sy;
    };
    for (int i = 1; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        w.u.at(i, j) = (psi(g.xf[i], g.yf[j + 1]) - psi(g.xf[i], g.yf[j])) / g.dy;
    for (int i = 0; i < g.nx; ++i)
      for (int j = 1; j < g.ny; ++j)
        w.v.at(i, j) = -(psi(g.xf[i + 1], g.yf[j]) - psi(g.xf[i], g.yf[j])) / g.dx[i];

    // route 1: mu_gl(phi) grad(phi) on faces
    Field lap(Loc::center, g);
    laplacian_cc(g, phi, lap);
    Field mu(Loc::center, g);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j)
        mu.at(i, j) = sigma / eps * MaterialLaws::dpsi(phi.at(i, j)) - sigma * eps * lap.at(i, j);
    apply_mu_bc(mu);
    double r1 = 0.0;
    for (int i = 1; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const double f = 0.5 * (mu.at(i - 1, j) + mu.at(i, j)) *
                         (phi.at(i, j) - phi.at(i - 1, j)) / g.dxc[i];
        r1 += f * w.u.at(i, j) * g.dxc[i] * g.dy;
      }
    for (int i = 0; i < g.nx; ++i)
      for (int j = 1; j < g.ny; ++j) {
        const double f = 0.5 * (mu.at(i, j - 1) + mu.at(i, j)) *
                         (phi.at(i, j) - phi.at(i, j - 1)) / g.dy;
        r1 += f * w.v.at(i, j) * g.dx[i] * g.dy;
      }

    // route 2: direct divergence of the capillary stress zeta
    // zeta_xx/zeta_yy at centers, zeta_xy at nodes
    std::vector<double> zxx(size_t(g.nx) * g.ny), zyy(size_t(g.nx) * g.ny);
    std::vector<double> zxy(size_t(g.nx + 1) * (g.ny + 1));
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const double px = (phi.at(i + 1, j) - phi.at(i - 1, j)) / (xce(i + 1) - xce(i - 1));
        const double py = (phi.at(i, j + 1) - phi.at(i, j - 1)) / (2.0 * g.dy);
        const double gsq = px * px + py * py;
        const double iso = 0.5 * sigma * eps * gsq + sigma / eps * MaterialLaws::psi(phi.at(i, j));
        zxx[size_t(i) * g.ny + j] = -sigma * eps * px * px + iso;
        zyy[size_t(i) * g.ny + j] = -sigma * eps * py * py + iso;
      }
    for (int i = 0; i <= g.nx; ++i)
      for (int j = 0; j <= g.ny; ++j) {
        const double px = (0.5 * (phi.at(i, j) + phi.at(i, j - 1)) -
                           0.5 * (phi.at(i - 1, j) + phi.at(i - 1, j - 1))) /
                          g.dxc[i];
        const double py = (0.5 * (phi.at(i, j) + phi.at(i - 1, j)) -
                           0.5 * (phi.at(i, j - 1) + phi.at(i - 1, j - 1))) /
                          g.dy;
        zxy[size_t(i) * (g.ny + 1) + j] = -sigma * eps * px * py;
      }
    double r2 = 0.0;
    for (int i = 1; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const double div = (zxx[size_t(i) * g.ny + j] - zxx[size_t(i - 1) * g.ny + j]) / g.dxc[i] +
                           (zxy[size_t(i) * (g.ny + 1) + j + 1] - zxy[size_t(i) * (g.ny + 1) + j]) / g.dy;
        r2 += div * w.u.at(i, j) * g.dxc[i] * g.dy;
      }
    for (int i = 0; i < g.nx; ++i)
      for (int j = 1; j < g.ny; ++j) {
        const double div = (zxy[size_t(i + 1) * (g.ny + 1) + j] - zxy[size_t(i) * (g.ny + 1) + j]) / g.dx[i] +
                           (zyy[size_t(i) * g.ny + j] - zyy[size_t(i) * g.ny + j - 1]) / g.dy;
        r2 += div * w.v.at(i, j) * g.dx[i] * g.dy;
      }
    // div zeta enters the momentum balance with the opposite sign of the force
    return std::fabs(r1 - (-r2));
  };
  const double m1 = misfit(16), m2 = misfit(32), m3 = misfit(64);
  CHECK(m1 / m2 > 3.0);
  CHECK(m2 / m3 > 3.0);
}

TEST_CASE("projection keeps the pressure mean at zero") {
  Setup su(32, 8, 0.2, 0.02, 6e-3, 4e-5, kPi / 2, 0.0, 4e-3, 1e-3);
  NsStepper ns(su.grid, su.basis);
  ChStepper ch(su.grid, su.basis);
  State s = su.tanh_state();
  su.fill_phi_ghosts(ch, s);
  ns.fill_velocity_ghosts(s, su.ctx, 0.0);
  for (int k = 0; k < 20; ++k) coupled_step(su, ch, ns, s, 1e-3);
  double pm = 0.0;
  for (int i = 0; i < su.grid.nx; ++i)
    for (int j = 0; j < su.grid.ny; ++j) pm += s.p.at(i, j) * su.grid.vol(i);
  CHECK(std::fabs(pm) <= 1e-12 * su.grid.lx * su.grid.ly);
}
