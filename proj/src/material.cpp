#include "nschwet/material.hpp"

#include <algorithm>
#include <cmath>

namespace nschwet {

MaterialLaws::MaterialLaws(const FluidPair& fluids, const WettingModel& wetting)
    : fluids_(fluids) {
  sigma_ = derive_sigma(fluids.sigma_la);
  sigma_sl_ = wetting.sigma_sl;
  sigma_sa_ = wetting.sigma_sa;
  dsig_ = sigma_sa_ - sigma_sl_;
  ssum_ = sigma_sl_ + sigma_sa_;
  matched_ = std::fabs(fluids.rho_l - fluids.rho_a) < 1e-12 * fluids.rho_l;
  lambda_ = matched_ ? 0.0 : fluids.rho_a / (fluids.rho_l - fluids.rho_a);
  log_eta_l_ = std::log(fluids.eta_l);
  log_eta_a_ = std::log(fluids.eta_a);
}

double MaterialLaws::rho(double phi) const {
  if (matched_) return fluids_.rho_l;
  const double rl = fluids_.rho_l, ra = fluids_.rho_a, lam = lambda_;
  if (phi <= -1.0 - 2.0 * lam) return 0.25 * ra;
  if (phi < -1.0 - lam) {
    const double s = 1.0 + 2.0 * lam + phi;
    return 0.25 * ra + 0.25 * ra / (lam * lam) * s * s;
  }
  if (phi <= 1.0 + lam) return 0.5 * (1.0 + phi) * rl + 0.5 * (1.0 - phi) * ra;
  if (phi < 1.0 + 2.0 * lam) {
    const double s = 1.0 + 2.0 * lam - phi;
    return rl + 0.75 * ra - 0.25 * ra / (lam * lam) * s * s;
  }
  return rl + 0.75 * ra;
}

double MaterialLaws::eta(double phi) const {
  // Eq. (4) becomes singular off [-1,1]; the phase field may overshoot, so
  // clamp before evaluating.
  const double p = std::clamp(phi, -1.0, 1.0);
  const double lam = fluids_.lambda_ratio;
  const double wl = (1.0 + p) * lam, wa = (1.0 - p);
  return std::exp((wl * log_eta_l_ + wa * log_eta_a_) / (wl + wa));
}

double MaterialLaws::jflux_coefficient(double m) const {
  if (!(m > 0.0)) throw ConfigError("jflux_coefficient requires m > 0");
  if (matched_) return 0.0;
  return 0.5 * m * (fluids_.rho_a - fluids_.rho_l);
}

}  // namespace nschwet
