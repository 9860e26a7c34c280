#include <cmath>
#include <random>

#include "doctest.h"
#include "nschwet/params.hpp"

using namespace nschwet;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("derive_sigma") {
  CHECK(derive_sigma(7.28e-2) == doctest::Approx(7.7216060505570990e-2).epsilon(1e-14));
  CHECK(derive_sigma(2.0 * std::sqrt(2.0) / 3.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(derive_sigma(0.0), ConfigError);
}

TEST_CASE("young_tensions") {
  {
    auto [sl, sa] = young_tensions(kPi / 2, 7.28e-2);
    CHECK(sl == doctest::Approx(3.64e-2).epsilon(1e-14));
    CHECK(sa == doctest::Approx(3.64e-2).epsilon(1e-14));
  }
  {
    auto [sl, sa] = young_tensions(kPi / 4, 7.28e-2);
    CHECK(sa - sl == doctest::Approx(7.28e-2 / std::sqrt(2.0)).epsilon(1e-13));
  }
  {
    auto [sl, sa] = young_tensions(kPi / 3, 1.0);
    CHECK(sl == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(sa == doctest::Approx(0.75).epsilon(1e-14));
  }
  CHECK_THROWS_AS(young_tensions(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(young_tensions(kPi, 1.0), ConfigError);
}

TEST_CASE("young relation holds to machine precision for random angles") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.05, kPi - 0.05);
  const double sla = 7.28e-2;
  for (int k = 0; k < 100; ++k) {
    const double th = d(rng);
    auto [sl, sa] = young_tensions(th, sla);
    CHECK(sl >= 0.0);
    CHECK(sa >= 0.0);
    CHECK(std::fabs(sa - sl - sla * std::cos(th)) <= 4e-16 * sla);
  }
}

TEST_CASE("slip lengths") {
  CHECK(slip_length_mobility(1e-1, 4e-5) == doctest::Approx(2e-3).epsilon(1e-14));
  CHECK(slip_length_mobility(1e-1, 1e-5) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(slip_length_mobility(1e-1, 1e-9) == doctest::Approx(1e-5).epsilon(1e-14));
  CHECK(slip_length_gnbc(1e-1, 2e-2) == doctest::Approx(2e-3).epsilon(1e-14));
  CHECK(slip_length_gnbc(1e-1, 0.0) == 0.0);
  CHECK(slip_length_gnbc(1e-3, 1e-2) == doctest::Approx(1e-5).epsilon(1e-14));
  // monotone in each argument
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.1, 10.0);
  for (int k = 0; k < 50; ++k) {
    const double eta = d(rng), m = d(rng), f = 1.0 + d(rng);
    CHECK(slip_length_mobility(eta * f, m) > slip_length_mobility(eta, m));
    CHECK(slip_length_mobility(eta, m * f) > slip_length_mobility(eta, m));
    CHECK(slip_length_gnbc(eta * f, m) > slip_length_gnbc(eta, m));
    CHECK(slip_length_gnbc(eta, m * f) > slip_length_gnbc(eta, m));
  }
}

TEST_CASE("capillary number") {
  const double sigma = derive_sigma(7.28e-2);
  CHECK(capillary_number(1e-1, 4e-3, sigma) ==
        doctest::Approx(5.1802694592421064e-3).epsilon(1e-13));
  CHECK(capillary_number(1e-1, 0.0, sigma) == 0.0);
  CHECK(capillary_number(1e-1, 8e-3, sigma) ==
        doctest::Approx(2.0 * capillary_number(1e-1, 4e-3, sigma)).epsilon(1e-14));
}

TEST_CASE("mobility_of_epsilon") {
  const MobilityScaling s{2.5e-6, 5e-5, 2.0};
  CHECK(mobility_of_epsilon(s, 5e-5) == doctest::Approx(2.5e-6).epsilon(1e-14));
  CHECK(mobility_of_epsilon(s, 1e-4) == doctest::Approx(1e-5).epsilon(1e-14));
  const MobilityScaling c{3e-6, 1e-4, 0.0};
  CHECK(mobility_of_epsilon(c, 1e-3) == doctest::Approx(3e-6).epsilon(1e-14));
  CHECK(mobility_of_epsilon(c, 1e-6) == doctest::Approx(3e-6).epsilon(1e-14));
}

TEST_CASE("config parsing is strict") {
  const std::string good = R"({
    "fluids": {"rho_l": 1e3, "rho_a": 1e3, "eta_l": 1e-1, "eta_a": 1e-1,
               "sigma_la": 7.28e-2, "lambda_ratio": 1.0},
    "interface": {"epsilon": 1.6e-3, "mobility": 4e-5},
    "wetting": {"theta_eq": 1.5707963267948966, "nu1": "inf", "nu2": 0.0},
    "channel": {"lx": 0.2, "ly": 0.02, "u_wall_max": 4e-3, "ramp_time": 1.0,
                "interface_x0": 0.1},
    "numerics": {"nx": 100, "ny": 16, "x_stretch": 1.0, "dt": 1e-4, "t_end": 1.0,
                 "equil_tol": 1e-4, "lin_tol_ch": 1e-9, "lin_tol_p": 1e-10,
                 "stab_s": 2.0, "sample_dt": 0.01}
  })";
  const CaseConfig c = parse_config(good);
  CHECK(c.fluids.sigma_la == 7.28e-2);
  CHECK(c.wetting.nu1.is_infinite());
  CHECK(c.wetting.sigma_sl == doctest::Approx(3.64e-2).epsilon(1e-13));

  // unknown keys are hard errors
  std::string bad = good;
  bad.replace(bad.find("\"lambda_ratio\""), 14, "\"lambda_ratioX\"");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);

  // nu1 as a number
  std::string finite = good;
  finite.replace(finite.find("\"inf\""), 5, "125.0");
  const CaseConfig cf = parse_config(finite);
  CHECK_FALSE(cf.wetting.nu1.is_infinite());
  CHECK(cf.wetting.nu1.value() == 125.0);

  // mobility and scaling are mutually exclusive
  std::string both = good;
  both.replace(both.find("\"mobility\": 4e-5"), 16,
               "\"mobility\": 4e-5, \"scaling\": {\"m0\": 1.0, \"eps0\": 1.0, \"alpha\": 2.0}");
  CHECK_THROWS_AS(parse_config(both), ConfigError);

  // overrides
  const std::string ov = apply_override(good, "interface.epsilon", "8e-4");
  CHECK(parse_config(ov).interface.epsilon == 8e-4);
  const std::string ov2 =
      apply_override(good, "interface.scaling", R"({"m0": 0.4, "eps0": 1.0, "alpha": 2.0})");
  const CaseConfig c2 = parse_config(ov2);
  REQUIRE(c2.interface.scaling.has_value());
  CHECK(c2.interface.mobility == doctest::Approx(0.4 * 1.6e-3 * 1.6e-3).epsilon(1e-14));
}

TEST_CASE("preset registry reproduces the published parameter table") {
  const double pi2 = 1.5707963267948966;
  struct Cell {
    const char* name;
    double eta_a, eps, m, nu2, uw, theta, s_m, s_nu;
  };
  // resolved mobility and slip lengths per preset (liquid-side eta = 1e-1)
  const Cell cells[] = {
      {"1A", 1e-1, 1.6e-3, 4e-5, 0.0, 4e-3, pi2, 2e-3, 0.0},
      {"1A_1mm", 1e-1, 1.6e-3, 1e-5, 0.0, 4e-3, pi2, 1e-3, 0.0},
      {"1B", 1e-1, 5e-5, 4e-5, 0.0, 4e-3, pi2, 2e-3, 0.0},
      {"1B_1mm", 1e-1, 5e-5, 1e-5, 0.0, 4e-3, pi2, 1e-3, 0.0},
      {"1C", 1e-1, 1.6e-3, 2.56e-3, 0.0, 4e-3, pi2, 1.6e-2, 0.0},
      {"2A", 1e-1, 1.6e-3, 1.024e-6, 2e-2, 4e-3, pi2, 3.2e-4, 2e-3},
      {"2A_1mm", 1e-1, 1.6e-3, 1.024e-6, 1e-2, 4e-3, pi2, 3.2e-4, 1e-3},
      {"2B", 1e-3, 5e-5, 1e-9, 1e-2, 4e-3, pi2, 1e-5, 1e-3},
      {"2C", 1e-1, 5e-5, 1e-9, 1e-2, 4e-3, 0.7853981633974483, 1e-5, 1e-3},
  };
  for (const Cell& cell : cells) {
    CAPTURE(cell.name);
    const CaseConfig c = load_preset(cell.name);
    CHECK(c.fluids.rho_l == 1e3);
    CHECK(c.fluids.rho_a == 1e3);
    CHECK(c.fluids.eta_l == 1e-1);
    CHECK(c.fluids.eta_a == cell.eta_a);
    CHECK(c.fluids.sigma_la == 7.28e-2);
    CHECK(c.fluids.lambda_ratio == 1.0);
    CHECK(c.interface.epsilon == cell.eps);
    CHECK(c.interface.mobility == cell.m);
    CHECK(c.wetting.nu1.is_infinite());
    CHECK(c.wetting.nu2 == cell.nu2);
    CHECK(c.channel.u_wall_max == cell.uw);
    CHECK(c.wetting.theta_eq == cell.theta);
    CHECK(c.channel.lx == 0.2);
    CHECK(c.channel.ly == 0.02);
    CHECK(slip_length_mobility(c.fluids.eta_l, c.interface.mobility) ==
          doctest::Approx(cell.s_m).epsilon(1e-14));
    if (cell.nu2 > 0)
      CHECK(slip_length_gnbc(c.fluids.eta_l, c.wetting.nu2) ==
            doctest::Approx(cell.s_nu).epsilon(1e-14));
  }
  // 2B ambient-side slip lengths: s_nu = 1e-5 m, s_m = sqrt(1e-3 * 1e-9)
  const CaseConfig b = load_preset("2B");
  CHECK(slip_length_gnbc(b.fluids.eta_a, b.wetting.nu2) == doctest::Approx(1e-5).epsilon(1e-14));
  CHECK(slip_length_mobility(b.fluids.eta_a, b.interface.mobility) ==
        doctest::Approx(1e-6).epsilon(1e-14));
}
