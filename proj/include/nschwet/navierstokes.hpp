#pragma once
// Momentum step for the variable-density/viscosity system: explicit
// second-order upwind convection and relative-flux transport, implicit
// viscous stress (full tensor, coupled u-v BiCGStab solve), well-balanced
// capillary forcing mu grad(phi) with the gradient part absorbed into the
// redefined pressure, incremental pressure projection with mean-zero
// constraint, GNBC wall slip, impermeability, and the ramped Couette
// profile at the channel ends.

#include "nschwet/grid.hpp"
#include "nschwet/linsolve.hpp"
#include "nschwet/material.hpp"

namespace nschwet {

// Sinusoidally ramped wall speed, C^1 at t = 0 and t = ramp_time.
double wall_velocity(double t, const ChannelSpec& ch);

// Couette in/outflow profile with slip length s_nu; odd about the centerline.
double inflow_profile(double x2, double t, const ChannelSpec& ch, double s_nu);

// Robin ghost value for the wall-tangential velocity,
//   (u_g + u_i)/2 - u_wall = nu2 [ eta (u_i - u_g)/dy + young ],
// written for the bottom wall; the top wall reduces to the same algebra.
double gnbc_ghost_value(double u_interior, double u_wall, double nu2, double eta_wall,
                        double young, double dy);

struct NsContext {
  const MaterialLaws* laws = nullptr;
  const WettingModel* wetting = nullptr;
  const ChannelSpec* channel = nullptr;
  double eps = 0.0;          // interface thickness (GNBC Young term)
  bool closed_box = false;   // harness flag: channel ends become no-slip walls
};

class NsStepper {
 public:
  struct Coeffs {
    double dt = 0.0;
    double lin_tol_v = 1e-9;
    double lin_tol_p = 1e-10;
    double div_target = 0.0;  // absolute post-projection divergence target
    double jflux_c = 0.0;     // c_J = m (rho_a - rho_l)/2
  };

  NsStepper(const StaggeredGrid& g, const CosineBasisY& basis);

  // One momentum step from time t = s.t to t + dt. state.phi/.mu must hold
  // the same step's CH update with ghosts applied; phi_old is the previous
  // phase field (rho^n and the lagged GNBC Young term). Updates u, v, p and
  // refreshes the velocity and pressure ghosts at t + dt.
  void step(State& s, const Field& phi_old, const NsContext& ctx, const Coeffs& c);

  // Velocity BC application at time t (GNBC terms from the state's phase field).
  void fill_velocity_ghosts(State& s, const NsContext& ctx, double t) const;
  static void fill_p_ghosts(Field& p);

  double last_div_max = 0.0;
  int last_visc_iters = 0;
  int last_p_iters = 0;

 private:
  struct GnbcArrays {
    std::vector<double> eta_bot, eta_top;      // wall viscosity at x-faces
    std::vector<double> young_bot, young_top;  // L(phi) d_x phi at x-faces
  };
  GnbcArrays gnbc_terms(const Field& phi, const NsContext& ctx) const;
  void build_poisson_precond(double beta_bar);

  const StaggeredGrid* g_ = nullptr;
  const CosineBasisY* basis_ = nullptr;
  XLaplacian xlap_;
  TriBatch poisson_;
  double poisson_beta_ = -1.0;
};

}  // namespace nschwet
