#pragma once
// Semi-implicit (IMEX) Cahn-Hilliard step: explicit second-order upwind
// convection, implicit mobility diffusion, linearly stabilized potential
// splitting, wetting boundary condition on the walls (nu1 infinite -> lagged
// Robin ghost; finite nu1 -> explicit surface update of the wall trace) and
// homogeneous Neumann closures at the channel ends.
//
// The coupled (phi, mu) update is solved monolithically: the y direction is
// diagonalized in the cosine eigenbasis and the per-mode pentadiagonal Schur
// systems are solved directly, then the block residual is verified against
// lin_tol_ch (a preconditioned BiCGStab refinement backs this up; see the
// solver notes in README).

#include "nschwet/grid.hpp"
#include "nschwet/linsolve.hpp"
#include "nschwet/material.hpp"

namespace nschwet {

struct ChCoeffs {
  double dt = 0.0;
  double m = 0.0;
  double eps = 0.0;
  double sigma = 0.0;
  double stab_s = 2.0;
  double lin_tol = 1e-9;
};

// Mirror ghosts at x = 0 and x = Lx (Eq.-type homogeneous Neumann).
void apply_pm_bc(Field& s);
// Mirror ghosts on all four sides (chemical potential).
void apply_mu_bc(Field& mu);

// Wetting ghost rows for phi: ghost = interior - dy * g with
// g = sigma'_SF(trace)/(sigma eps) (+ the finite-nu1 relaxation deficit).
void apply_wetting_bc_phi(Field& phi, const StaggeredGrid& g, const MaterialLaws& laws,
                          const ChCoeffs& c, const std::vector<double>& gflux_bot,
                          const std::vector<double>& gflux_top);

double total_mass(const StaggeredGrid& g, const Field& phi);

class ChStepper {
 public:
  ChStepper(const StaggeredGrid& g, const CosineBasisY& basis);

  // One step; state.u/.v ghosts must be filled for time n. On return phi and
  // mu hold time n+1 values with ghosts applied. Throws SolverFailure if the
  // residual verification fails.
  void step(State& s, const MaterialLaws& laws, const WettingModel& wetting,
            const ChCoeffs& c);

  // Lagged Neumann flux strength g at each wall column (time-n values).
  void wall_flux(const Field& phi, const Field& u, const MaterialLaws& laws,
                 const WettingModel& wetting, const ChCoeffs& c,
                 std::vector<double>& gbot, std::vector<double>& gtop);

  // finite-nu1 wall trace state (initialized on first step)
  std::vector<double> trace_bot, trace_top;

  // diagnostics from the last step
  double last_residual = 0.0;
  int last_refine_iters = 0;

 private:
  void prepare(const ChCoeffs& c);
  void lap_mirror(const double* in, double* out) const;

  const StaggeredGrid* g_ = nullptr;
  const CosineBasisY* basis_ = nullptr;
  XLaplacian xlap_;
  PentaBatch penta_;
  ChCoeffs cached_{};
  bool factored_ = false;
  bool have_trace_ = false;
  std::vector<double> prev_dnphi_bot_, prev_dnphi_top_;
  std::vector<double> wk_[6];
};

}  // namespace nschwet
