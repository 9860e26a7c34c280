#pragma once
// Pointwise closure relations: double-well potential, positivity-preserving
// density extension, Arrhenius viscosity, solid-fluid surface tension
// interpolation, and the relative mass-flux coefficient.

#include "nschwet/params.hpp"

namespace nschwet {

class MaterialLaws {
 public:
  MaterialLaws(const FluidPair& fluids, const WettingModel& wetting);

  static double psi(double phi) {
    const double q = phi * phi - 1.0;
    return 0.25 * q * q;
  }
  static double dpsi(double phi) { return phi * (phi * phi - 1.0); }

  double rho(double phi) const;
  double eta(double phi) const;

  double sigma_sf(double phi) const {
    return 0.25 * (phi * phi * phi - 3.0 * phi) * dsig_ + 0.5 * ssum_;
  }
  double dsigma_sf(double phi) const { return 0.75 * (phi * phi - 1.0) * dsig_; }

  // J = c_J grad(mu)
  double jflux_coefficient(double m) const;

  double sigma() const { return sigma_; }
  double sigma_la() const { return fluids_.sigma_la; }
  double sigma_sl() const { return sigma_sl_; }
  double sigma_sa() const { return sigma_sa_; }
  double lambda() const { return lambda_; }
  bool matched_density() const { return matched_; }
  const FluidPair& fluids() const { return fluids_; }

 private:
  FluidPair fluids_;
  double sigma_ = 0.0;
  double sigma_sl_ = 0.0, sigma_sa_ = 0.0;
  double dsig_ = 0.0, ssum_ = 0.0;  // sigma_sa - sigma_sl and sum
  double lambda_ = 0.0;
  bool matched_ = true;
  double log_eta_l_ = 0.0, log_eta_a_ = 0.0;
};

}  // namespace nschwet
