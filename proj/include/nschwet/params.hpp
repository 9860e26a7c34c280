#pragma once
// Physical and model parameters for the binary-fluid Couette cases, derived
// quantities (rescaled tension, Young split, slip lengths, capillary number,
// mobility scaling), and strict JSON config I/O. All quantities are SI with
// the d = 2 convention (densities kg/m^2, viscosities kg/s, tensions kg m/s^2).

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nschwet {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FluidPair {
  double rho_l = 0.0, rho_a = 0.0;   // mass densities
  double eta_l = 0.0, eta_a = 0.0;   // dynamic viscosities
  double sigma_la = 0.0;             // fluid-fluid surface tension
  double lambda_ratio = 1.0;         // intrinsic volume ratio Lambda
  void validate() const;
};

struct MobilityScaling {
  double m0 = 0.0, eps0 = 0.0, alpha = 0.0;  // m(eps) = m0 (eps/eps0)^alpha
};

struct InterfaceModel {
  double epsilon = 0.0;
  double mobility = 0.0;  // resolved value; follows scaling when present
  std::optional<MobilityScaling> scaling;
  void resolve_mobility();  // applies scaling at current epsilon
  void validate() const;
};

// Contact-angle relaxation coefficient. The infinite value selects the
// equilibrium Robin condition instead of the dynamic surface update, so it is
// a distinct variant rather than a large float.
class Nu1 {
 public:
  Nu1() = default;
  static Nu1 infinite() { return Nu1(); }
  static Nu1 finite(double v) {
    Nu1 n;
    n.inf_ = false;
    n.v_ = v;
    return n;
  }
  bool is_infinite() const { return inf_; }
  double value() const {
    if (inf_) throw std::logic_error("nu1 is infinite");
    return v_;
  }

 private:
  bool inf_ = true;
  double v_ = 0.0;
};

struct WettingModel {
  double theta_eq = 1.5707963267948966;  // equilibrium contact angle
  Nu1 nu1 = Nu1::infinite();
  double nu2 = 0.0;  // GNBC slip coefficient; 0 = no-slip
  // solid-fluid tensions from the symmetric Young split
  double sigma_sl = 0.0, sigma_sa = 0.0;
  void derive_tensions(double sigma_la);
  void validate() const;
};

struct ChannelSpec {
  double lx = 0.2, ly = 0.02;
  double u_wall_max = 0.0;   // plateau wall speed
  double ramp_time = 1.0;
  double interface_x0 = 0.1;
  double ell() const { return 0.5 * ly; }
  void validate() const;
};

struct Numerics {
  int nx = 0, ny = 0;
  double x_stretch = 1.0;   // far-field/window cell-size ratio; 1 = uniform
  double dt = 0.0;
  double t_end = 0.0;
  double equil_tol = 1e-4;
  double lin_tol_ch = 1e-9;
  double lin_tol_p = 1e-10;
  double stab_s = 2.0;
  double sample_dt = 0.01;
  void validate() const;
};

struct CaseConfig {
  FluidPair fluids;
  InterfaceModel interface;
  WettingModel wetting;
  ChannelSpec channel;
  Numerics numerics;
  void validate() const;
  // derived shorthands
  double sigma() const;
  double s_m(double eta) const;
  double s_nu(double eta) const;
};

// 2 sqrt(2) sigma = 3 sigma_la
double derive_sigma(double sigma_la);
// (sigma_sl, sigma_sa) with sum sigma_la and difference sigma_la cos(theta)
std::pair<double, double> young_tensions(double theta_eq, double sigma_la);
double slip_length_mobility(double eta, double m);
double slip_length_gnbc(double eta, double nu2);
double capillary_number(double eta, double u_wall_max, double sigma);
double mobility_of_epsilon(const MobilityScaling& s, double epsilon);

CaseConfig parse_config(const std::string& json_text);
CaseConfig load_config_file(const std::string& path);
std::string config_to_json(const CaseConfig& c);

// --set key=value on the raw JSON text; value parsed as JSON scalar
std::string apply_override(const std::string& json_text, const std::string& dotted_key,
                           const std::string& value);

// Shipped presets (configs/*.json); 1A..2C plus the 1 mm slip variants.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
std::string preset_path(const std::string& name);
std::string preset_json(const std::string& name);
CaseConfig load_preset(const std::string& name);

}  // namespace nschwet
