#include "nschwet/params.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nschwet {

using nlohmann::json;

namespace {
constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be strictly positive");
}
}  // namespace

void FluidPair::validate() const {
  require_positive(rho_l, "fluids.rho_l");
  require_positive(rho_a, "fluids.rho_a");
  require_positive(eta_l, "fluids.eta_l");
  require_positive(eta_a, "fluids.eta_a");
  require_positive(sigma_la, "fluids.sigma_la");
  require_positive(lambda_ratio, "fluids.lambda_ratio");
}

void InterfaceModel::resolve_mobility() {
  if (scaling) mobility = mobility_of_epsilon(*scaling, epsilon);
}

void InterfaceModel::validate() const {
  require_positive(epsilon, "interface.epsilon");
  require_positive(mobility, "interface.mobility");
  if (scaling) {
    require_positive(scaling->m0, "interface.scaling.m0");
    require_positive(scaling->eps0, "interface.scaling.eps0");
    if (scaling->alpha != 0.0 && !(scaling->alpha > 0.0 && scaling->alpha < 3.0))
      fail("interface.scaling.alpha must lie in (0, 3) (or 0 for constant mobility)");
  }
}

void WettingModel::derive_tensions(double sigma_la) {
  std::tie(sigma_sl, sigma_sa) = young_tensions(theta_eq, sigma_la);
}

void WettingModel::validate() const {
  if (!(theta_eq > 0.0 && theta_eq < kPi)) fail("wetting.theta_eq must lie in (0, pi)");
  if (!nu1.is_infinite() && !(nu1.value() > 0.0)) fail("wetting.nu1 must be positive or \"inf\"");
  if (!(nu2 >= 0.0)) fail("wetting.nu2 must be nonnegative");
  if (sigma_sl < 0.0 || sigma_sa < 0.0) fail("solid-fluid tensions must be nonnegative");
}

void ChannelSpec::validate() const {
  require_positive(lx, "channel.lx");
  require_positive(ly, "channel.ly");
  if (!(u_wall_max >= 0.0)) fail("channel.u_wall_max must be nonnegative");
  require_positive(ramp_time, "channel.ramp_time");
  if (!(interface_x0 > 0.0 && interface_x0 < lx)) fail("channel.interface_x0 must lie inside (0, lx)");
}

void Numerics::validate() const {
  if (nx < 4 || ny < 4) fail("numerics.nx and ny must be >= 4");
  if (!(x_stretch >= 1.0)) fail("numerics.x_stretch must be >= 1");
  require_positive(dt, "numerics.dt");
  require_positive(t_end, "numerics.t_end");
  require_positive(equil_tol, "numerics.equil_tol");
  require_positive(lin_tol_ch, "numerics.lin_tol_ch");
  require_positive(lin_tol_p, "numerics.lin_tol_p");
  if (!(stab_s >= 0.0)) fail("numerics.stab_s must be nonnegative");
  require_positive(sample_dt, "numerics.sample_dt");
}

void CaseConfig::validate() const {
  fluids.validate();
  interface.validate();
  wetting.validate();
  channel.validate();
  numerics.validate();
}

double CaseConfig::sigma() const { return derive_sigma(fluids.sigma_la); }
double CaseConfig::s_m(double eta) const { return slip_length_mobility(eta, interface.mobility); }
double CaseConfig::s_nu(double eta) const { return slip_length_gnbc(eta, wetting.nu2); }

double derive_sigma(double sigma_la) {
  if (!(sigma_la > 0.0)) fail("sigma_la must be strictly positive");
  return 3.0 * sigma_la / (2.0 * std::sqrt(2.0));
}

std::pair<double, double> young_tensions(double theta_eq, double sigma_la) {
  if (!(theta_eq > 0.0 && theta_eq < kPi)) fail("theta_eq must lie in (0, pi)");
  const double c = std::cos(theta_eq);
  return {0.5 * sigma_la * (1.0 - c), 0.5 * sigma_la * (1.0 + c)};
}

double slip_length_mobility(double eta, double m) {
  if (!(eta > 0.0) || !(m > 0.0)) fail("slip_length_mobility requires positive eta, m");
  return std::sqrt(eta * m);
}

double slip_length_gnbc(double eta, double nu2) {
  if (!(eta > 0.0) || !(nu2 >= 0.0)) fail("slip_length_gnbc requires eta > 0, nu2 >= 0");
  return eta * nu2;
}

double capillary_number(double eta, double u_wall_max, double sigma) {
  if (!(eta > 0.0) || !(sigma > 0.0) || !(u_wall_max >= 0.0))
    fail("capillary_number requires positive eta, sigma and nonnegative wall speed");
  return eta * u_wall_max / sigma;
}

double mobility_of_epsilon(const MobilityScaling& s, double epsilon) {
  if (!(epsilon > 0.0)) fail("mobility_of_epsilon requires epsilon > 0");
  return s.m0 * std::pow(epsilon / s.eps0, s.alpha);
}

// ----------------------------------------------------------------- JSON ---

namespace {

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) { ok = true; break; }
    if (!ok) fail("unknown key \"" + where + "." + it.key() + "\"");
  }
}

double num(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail("missing key \"" + where + "." + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number()) fail("\"" + where + "." + key + "\" must be a number");
  return v.get<double>();
}

double num_or(const json& j, const char* key, double dflt) {
  return j.contains(key) ? j.at(key).get<double>() : dflt;
}

}  // namespace

CaseConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "", {"fluids", "interface", "wetting", "channel", "numerics"});
  for (const char* sec : {"fluids", "interface", "wetting", "channel", "numerics"})
    if (!j.contains(sec)) fail(std::string("missing section \"") + sec + "\"");

  CaseConfig c;

  const json& f = j["fluids"];
  check_keys(f, "fluids", {"rho_l", "rho_a", "eta_l", "eta_a", "sigma_la", "lambda_ratio"});
  c.fluids.rho_l = num(f, "fluids", "rho_l");
  c.fluids.rho_a = num(f, "fluids", "rho_a");
  c.fluids.eta_l = num(f, "fluids", "eta_l");
  c.fluids.eta_a = num(f, "fluids", "eta_a");
  c.fluids.sigma_la = num(f, "fluids", "sigma_la");
  c.fluids.lambda_ratio = num_or(f, "lambda_ratio", 1.0);

  const json& itf = j["interface"];
  check_keys(itf, "interface", {"epsilon", "mobility", "scaling"});
  c.interface.epsilon = num(itf, "interface", "epsilon");
  if (itf.contains("scaling")) {
    if (itf.contains("mobility"))
      fail("interface: give either mobility or scaling, not both");
    const json& s = itf["scaling"];
    check_keys(s, "interface.scaling", {"m0", "eps0", "alpha"});
    MobilityScaling ms;
    ms.m0 = num(s, "interface.scaling", "m0");
    ms.eps0 = num(s, "interface.scaling", "eps0");
    ms.alpha = num(s, "interface.scaling", "alpha");
    c.interface.scaling = ms;
    c.interface.resolve_mobility();
  } else {
    c.interface.mobility = num(itf, "interface", "mobility");
  }

  const json& w = j["wetting"];
  check_keys(w, "wetting", {"theta_eq", "nu1", "nu2"});
  c.wetting.theta_eq = num(w, "wetting", "theta_eq");
  if (!w.contains("nu1")) fail("missing key \"wetting.nu1\"");
  if (w["nu1"].is_string()) {
    if (w["nu1"].get<std::string>() != "inf") fail("wetting.nu1 must be a number or \"inf\"");
    c.wetting.nu1 = Nu1::infinite();
  } else if (w["nu1"].is_number()) {
    c.wetting.nu1 = Nu1::finite(w["nu1"].get<double>());
  } else {
    fail("wetting.nu1 must be a number or \"inf\"");
  }
  c.wetting.nu2 = num(w, "wetting", "nu2");

  const json& ch = j["channel"];
  check_keys(ch, "channel", {"lx", "ly", "u_wall_max", "ramp_time", "interface_x0"});
  c.channel.lx = num(ch, "channel", "lx");
  c.channel.ly = num(ch, "channel", "ly");
  c.channel.u_wall_max = num(ch, "channel", "u_wall_max");
  c.channel.ramp_time = num_or(ch, "ramp_time", 1.0);
  c.channel.interface_x0 = num_or(ch, "interface_x0", 0.5 * c.channel.lx);

  const json& n = j["numerics"];
  check_keys(n, "numerics",
             {"nx", "ny", "x_stretch", "dt", "t_end", "equil_tol", "lin_tol_ch", "lin_tol_p",
              "stab_s", "sample_dt"});
  c.numerics.nx = static_cast<int>(num(n, "numerics", "nx"));
  c.numerics.ny = static_cast<int>(num(n, "numerics", "ny"));
  c.numerics.x_stretch = num_or(n, "x_stretch", 1.0);
  c.numerics.dt = num(n, "numerics", "dt");
  c.numerics.t_end = num(n, "numerics", "t_end");
  c.numerics.equil_tol = num_or(n, "equil_tol", 1e-4);
  c.numerics.lin_tol_ch = num_or(n, "lin_tol_ch", 1e-9);
  c.numerics.lin_tol_p = num_or(n, "lin_tol_p", 1e-10);
  c.numerics.stab_s = num_or(n, "stab_s", 2.0);
  c.numerics.sample_dt = num_or(n, "sample_dt", 0.01);

  c.wetting.derive_tensions(c.fluids.sigma_la);
  c.validate();
  return c;
}

CaseConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const CaseConfig& c) {
  json j;
  j["fluids"] = {{"rho_l", c.fluids.rho_l},     {"rho_a", c.fluids.rho_a},
                 {"eta_l", c.fluids.eta_l},     {"eta_a", c.fluids.eta_a},
                 {"sigma_la", c.fluids.sigma_la}, {"lambda_ratio", c.fluids.lambda_ratio}};
  if (c.interface.scaling) {
    j["interface"] = {{"epsilon", c.interface.epsilon},
                      {"scaling",
                       {{"m0", c.interface.scaling->m0},
                        {"eps0", c.interface.scaling->eps0},
                        {"alpha", c.interface.scaling->alpha}}}};
  } else {
    j["interface"] = {{"epsilon", c.interface.epsilon}, {"mobility", c.interface.mobility}};
  }
  j["wetting"] = {{"theta_eq", c.wetting.theta_eq}, {"nu2", c.wetting.nu2}};
  if (c.wetting.nu1.is_infinite())
    j["wetting"]["nu1"] = "inf";
  else
    j["wetting"]["nu1"] = c.wetting.nu1.value();
  j["channel"] = {{"lx", c.channel.lx},
                  {"ly", c.channel.ly},
                  {"u_wall_max", c.channel.u_wall_max},
                  {"ramp_time", c.channel.ramp_time},
                  {"interface_x0", c.channel.interface_x0}};
  j["numerics"] = {{"nx", c.numerics.nx},
                   {"ny", c.numerics.ny},
                   {"x_stretch", c.numerics.x_stretch},
                   {"dt", c.numerics.dt},
                   {"t_end", c.numerics.t_end},
                   {"equil_tol", c.numerics.equil_tol},
                   {"lin_tol_ch", c.numerics.lin_tol_ch},
                   {"lin_tol_p", c.numerics.lin_tol_p},
                   {"stab_s", c.numerics.stab_s},
                   {"sample_dt", c.numerics.sample_dt}};
  return j.dump(2) + "\n";
}

std::string apply_override(const std::string& json_text, const std::string& dotted_key,
                           const std::string& value) {
  json j = json::parse(json_text);
  json v;
  try {
    v = json::parse(value);
  } catch (...) {
    v = value;  // bare strings like inf
  }
  json* cur = &j;
  size_t pos = 0;
  while (true) {
    size_t dot = dotted_key.find('.', pos);
    std::string part = dotted_key.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (part.empty()) fail("bad --set key: " + dotted_key);
    if (dot == std::string::npos) {
      // switching between mobility and scaling drops the other representation
      if (part == "mobility") cur->erase("scaling");
      if (part == "scaling") cur->erase("mobility");
      (*cur)[part] = v;
      break;
    }
    cur = &(*cur)[part];
    pos = dot + 1;
  }
  return j.dump();
}

// -------------------------------------------------------------- presets ---

std::vector<std::string> preset_names() {
  return {"1A", "1A_1mm", "1B", "1B_1mm", "1C", "2A", "2A_1mm", "2B", "2C"};
}

bool is_preset(const std::string& name) {
  for (const auto& p : preset_names())
    if (p == name) return true;
  return false;
}

std::string preset_path(const std::string& name) {
  if (!is_preset(name)) fail("unknown preset \"" + name + "\"");
  namespace fs = std::filesystem;
  std::vector<fs::path> roots;
  if (const char* e = std::getenv("NSCHWET_CONFIG_DIR")) roots.emplace_back(e);
  roots.emplace_back("configs");
#ifdef NSCHWET_SOURCE_DIR
  roots.emplace_back(fs::path(NSCHWET_SOURCE_DIR) / "configs");
#endif
  for (const auto& r : roots) {
    fs::path p = r / (name + ".json");
    if (fs::exists(p)) return p.string();
  }
  fail("preset config file " + name + ".json not found (set NSCHWET_CONFIG_DIR)");
}

std::string preset_json(const std::string& name) {
  std::ifstream in(preset_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CaseConfig load_preset(const std::string& name) { return parse_config(preset_json(name)); }

}  // namespace nschwet
