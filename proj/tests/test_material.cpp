#include <cmath>
#include <random>

#include "doctest.h"
#include "nschwet/material.hpp"

using namespace nschwet;

namespace {

MaterialLaws make_laws(double rho_l, double rho_a, double eta_l, double eta_a, double theta) {
  FluidPair f;
  f.rho_l = rho_l;
  f.rho_a = rho_a;
  f.eta_l = eta_l;
  f.eta_a = eta_a;
  f.sigma_la = 7.28e-2;
  WettingModel w;
  w.theta_eq = theta;
  w.derive_tensions(f.sigma_la);
  return MaterialLaws(f, w);
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("double well and derivative") {
  CHECK(MaterialLaws::psi(1.0) == 0.0);
  CHECK(MaterialLaws::psi(-1.0) == 0.0);
  CHECK(MaterialLaws::dpsi(1.0) == 0.0);
  CHECK(MaterialLaws::dpsi(-1.0) == 0.0);
  CHECK(MaterialLaws::psi(0.0) == 0.25);
  CHECK(MaterialLaws::dpsi(0.0) == 0.0);
  CHECK(MaterialLaws::psi(2.0) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(MaterialLaws::dpsi(2.0) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("density extension branches") {
  const auto laws = make_laws(2.0, 1.0, 1e-1, 1e-1, kPi / 2);  // lambda = 1
  CHECK(laws.lambda() == doctest::Approx(1.0));
  CHECK(laws.rho(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(laws.rho(-1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(laws.rho(-3.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(laws.rho(-5.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(laws.rho(-2.5) == doctest::Approx(0.3125).epsilon(1e-15));
  CHECK(laws.rho(4.0) == doctest::Approx(2.75).epsilon(1e-15));
}

TEST_CASE("density is C1 at the four breakpoints") {
  const auto laws = make_laws(2.0, 1.0, 1e-1, 1e-1, kPi / 2);
  const double lam = 1.0;
  const double breaks[4] = {-1.0 - 2.0 * lam, -1.0 - lam, 1.0 + lam, 1.0 + 2.0 * lam};
  const double h = 1e-7;
  for (double b : breaks) {
    CHECK(laws.rho(b - 1e-14) == doctest::Approx(laws.rho(b + 1e-14)).epsilon(1e-10));
    const double dl = (laws.rho(b) - laws.rho(b - h)) / h;
    const double dr = (laws.rho(b + h) - laws.rho(b)) / h;
    CHECK(dl == doctest::Approx(dr).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("density stays positive for wild phase values") {
  const auto laws = make_laws(2.0, 1.0, 1e-1, 1e-1, kPi / 2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (int k = 0; k < 10000; ++k) {
    const double r = laws.rho(d(rng));
    CHECK(r >= 0.25 - 1e-15);  // rho_a / 4
  }
}

TEST_CASE("matched densities collapse the extension") {
  const auto laws = make_laws(1e3, 1e3, 1e-1, 1e-1, kPi / 2);
  CHECK(laws.matched_density());
  CHECK(laws.rho(0.3) == 1e3);
  CHECK(laws.rho(-7.0) == 1e3);
}

TEST_CASE("arrhenius viscosity") {
  const auto laws = make_laws(1e3, 1e3, 1e-1, 1e-3, kPi / 2);
  CHECK(laws.eta(1.0) == doctest::Approx(1e-1).epsilon(1e-13));
  CHECK(laws.eta(-1.0) == doctest::Approx(1e-3).epsilon(1e-13));
  CHECK(laws.eta(0.0) == doctest::Approx(std::sqrt(1e-1 * 1e-3)).epsilon(1e-13));
  CHECK(laws.eta(0.5) == doctest::Approx(std::pow(10.0, -1.5)).epsilon(1e-13));
  // clamped outside [-1, 1]
  CHECK(laws.eta(1.4) == laws.eta(1.0));
  CHECK(laws.eta(-1.4) == laws.eta(-1.0));
  // bounded between the pure viscosities
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double e = laws.eta(d(rng));
    CHECK(e >= 1e-3 * (1 - 1e-12));
    CHECK(e <= 1e-1 * (1 + 1e-12));
  }
}

TEST_CASE("solid-fluid tension interpolation") {
  const auto laws = make_laws(1e3, 1e3, 1e-1, 1e-1, kPi / 4);
  CHECK(laws.sigma_sf(1.0) == doctest::Approx(laws.sigma_sl()).epsilon(1e-14));
  CHECK(laws.sigma_sf(-1.0) == doctest::Approx(laws.sigma_sa()).epsilon(1e-14));
  CHECK(laws.dsigma_sf(1.0) == doctest::Approx(0.0));
  CHECK(laws.dsigma_sf(-1.0) == doctest::Approx(0.0));
  CHECK(laws.dsigma_sf(0.0) ==
        doctest::Approx(-0.75 * 7.28e-2 / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("derivatives match centered differences") {
  const auto laws = make_laws(1e3, 1e3, 1e-1, 1e-1, kPi / 3);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const double p = d(rng);
    const double fd_psi = (MaterialLaws::psi(p + h) - MaterialLaws::psi(p - h)) / (2 * h);
    CHECK(MaterialLaws::dpsi(p) == doctest::Approx(fd_psi).epsilon(1e-8).scale(1.0));
    const double fd_sf = (laws.sigma_sf(p + h) - laws.sigma_sf(p - h)) / (2 * h);
    CHECK(laws.dsigma_sf(p) == doctest::Approx(fd_sf).epsilon(1e-8).scale(0.1));
  }
}

TEST_CASE("relative mass-flux coefficient") {
  const auto matched = make_laws(1e3, 1e3, 1e-1, 1e-1, kPi / 2);
  CHECK(matched.jflux_coefficient(1e-3) == 0.0);
  const auto contrast = make_laws(2.0, 1.0, 1e-1, 1e-1, kPi / 2);
  CHECK(contrast.jflux_coefficient(1e-3) == doctest::Approx(-5e-4).epsilon(1e-15));
  const auto inverse = make_laws(1.0, 2.0, 1e-1, 1e-1, kPi / 2);
  CHECK(inverse.jflux_coefficient(1e-3) > 0.0);
  CHECK_THROWS_AS(contrast.jflux_coefficient(0.0), ConfigError);
}
