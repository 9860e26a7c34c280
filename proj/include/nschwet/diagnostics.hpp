#pragma once
// Energy functional and dissipation budget, plus the Couette quantities of
// interest: contact-point displacements, mid-box angle deviation, and the
// excess shear force on the wetting boundaries.

#include <optional>
#include <string>
#include <vector>

#include "nschwet/grid.hpp"
#include "nschwet/material.hpp"

namespace nschwet {

struct QoiRecord {
  double t = 0.0;
  double energy = 0.0;
  double mass = 0.0;
  double dx_bottom = 0.0, dx_top = 0.0;
  double theta_mid = 0.0;
  double f_s = 0.0;
  double div_max = 0.0;
  double budget_residual = 0.0;
  bool contact_error = false;
};

// Total energy: Ginzburg-Landau (face-gradient + midpoint potential), kinetic
// (midpoint), and the wall energy sum of sigma_SF over both walls. Ghost
// layers must be filled.
double energy(const StaggeredGrid& g, const State& s, const MaterialLaws& laws, double eps);

struct BudgetTerms {
  double dEdt = 0.0;
  double diffusion = 0.0;   // int m |grad mu|^2
  double viscous = 0.0;     // int grad u : tau
  double wall_relax = 0.0;  // int nu1 |sigma eps dn phi + sigma'_SF|^2
  double wall_slip = 0.0;   // int nu2^-1 |u_S - u_w|^2
  double production = 0.0;  // moving-wall work
  double bnd_pm = 0.0;      // in-/outflow boundary work and fluxes
  double residual = 0.0;    // dEdt + dissipation - production - bnd_pm
};

BudgetTerms dissipation_budget(const StaggeredGrid& g, const State& before, const State& after,
                               double dt, const MaterialLaws& laws, const WettingModel& wetting,
                               const ChannelSpec& ch, double eps, double mobility,
                               bool closed_box);

struct ContactPoints {
  double x_bottom = 0.0, x_top = 0.0;
  bool ok = false;
};

// phi = 0 crossings of the wall traces (two interior rows extrapolated
// linearly to the boundary); error flag unless each wall has exactly one.
ContactPoints contact_points(const StaggeredGrid& g, const Field& phi);

// Signed angle at the mid-box point between grad(phi) and (-1, 0);
// throws AnalysisError-like ConfigError when the gradient vanishes.
double midbox_angle(const StaggeredGrid& g, const Field& phi, const ChannelSpec& ch);

// Excess shear force on both wetting boundaries: wall shear corrected by the
// Couette baseline (local eta per column) plus the capillary wall term.
double shear_force_excess(const StaggeredGrid& g, const State& s, const MaterialLaws& laws,
                          const WettingModel& wetting, const ChannelSpec& ch, double eps,
                          double t, bool closed_box);

std::string qoi_csv_header();
std::string qoi_csv_row(const QoiRecord& q);

}  // namespace nschwet
