// Command-line driver for the binary-fluid Couette benchmark suite.
// Exit codes: 0 pass, 1 comparison/criterion fail, 2 invalid input,
// 3 solver failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nschwet/cahnhilliard.hpp"
#include "nschwet/harness.hpp"
#include "nschwet/kernels.hpp"
#include "nschwet/params.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nschwet;

namespace {

std::string resolve_case_json(const std::string& name) {
  if (is_preset(name)) return preset_json(name);
  std::ifstream in(name);
  if (!in) throw ConfigError("no preset or config file named \"" + name + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CaseConfig load_with_overrides(const std::string& name, const std::vector<std::string>& sets) {
  std::string text = resolve_case_json(name);
  for (const auto& kv : sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got \"" + kv + "\"");
    text = apply_override(text, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return parse_config(text);
}

std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a = 0, b = 0;
    if (ss >> a >> b) rows.emplace_back(a, b);
    // non-numeric header lines are skipped
  }
  if (rows.empty()) throw ConfigError("no numeric (eps, value) rows in " + path);
  return rows;
}

const PaperFixture& resolve_fixture(const std::string& id, const CaseConfig* cfg) {
  for (const auto& f : all_fixtures())
    if (f.id == id) return f;
  if (cfg) {
    // disambiguate table2/3/5 by the configured slip length
    const double sm = slip_length_mobility(cfg->fluids.eta_l, cfg->interface.mobility);
    const double snu = slip_length_gnbc(cfg->fluids.eta_l, cfg->wetting.nu2);
    for (const char* suffix : {"_s2", "_s1"}) {
      const std::string cand = id + suffix;
      for (const auto& f : all_fixtures())
        if (f.id == cand) {
          const double s = std::max(sm, snu);
          if (std::fabs(s - f.slip_length) < 0.01 * f.slip_length) return f;
        }
    }
    // fall back to the first matching prefix
  }
  for (const char* suffix : {"", "_s2", "_s1"})
    for (const auto& f : all_fixtures())
      if (f.id == id + suffix) return f;
  throw ConfigError("unknown fixture \"" + id + "\"");
}

std::vector<SimPoint> load_sim_points(const std::string& dir, CaseConfig* cfg_out) {
  std::vector<SimPoint> pts;
  CaseConfig cfg;
  bool have_cfg = false;
  if (fs::exists(fs::path(dir) / "config.json")) {
    cfg = load_config_file((fs::path(dir) / "config.json").string());
    have_cfg = true;
  }
  const fs::path sweep = fs::path(dir) / "sweep.json";
  if (fs::exists(sweep)) {
    json j;
    std::ifstream(sweep) >> j;
    for (const auto& r : j["rows"]) {
      SimPoint p;
      p.eps = r["eps"].get<double>();
      p.u_wall = have_cfg ? cfg.channel.u_wall_max : 0.0;
      p.q.dx_bottom = r["dx_bottom"].get<double>();
      p.q.dx_top = r["dx_top"].get<double>();
      p.q.theta_mid = r["theta_mid"].get<double>();
      p.q.f_s = r["F_S"].get<double>();
      pts.push_back(p);
    }
  } else if (fs::exists(fs::path(dir) / "run.json")) {
    json j;
    std::ifstream(fs::path(dir) / "run.json") >> j;
    SimPoint p;
    p.eps = j["eps"].get<double>();
    p.u_wall = j["u_wall_max"].get<double>();
    p.q.dx_bottom = j["qoi"]["dx_bottom"].get<double>();
    p.q.dx_top = j["qoi"]["dx_top"].get<double>();
    p.q.theta_mid = j["qoi"]["theta_mid"].get<double>();
    p.q.f_s = j["qoi"]["F_S"].get<double>();
    pts.push_back(p);
  } else {
    throw ConfigError("no sweep.json or run.json under " + dir);
  }
  if (cfg_out && have_cfg) *cfg_out = cfg;
  return pts;
}

void save_config(const CaseConfig& c, const std::string& dir) {
  fs::create_directories(dir);
  std::ofstream(fs::path(dir) / "config.json") << config_to_json(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nschwet - binary-fluid Couette wetting benchmark"};
  app.require_subcommand(1);

  std::string case_name, out_dir, eps_csv, file_arg, fixture_id, in_dir, restart_from;
  std::vector<std::string> sets;
  double checkpoint_dt = 0.0, t_end = 0.0;
  long max_steps = -1;
  bool closed_box = false, verbose = false;

  auto* run = app.add_subcommand("run", "run one case to equilibration");
  run->add_option("--case", case_name, "preset name or config path")->required();
  run->add_option("--set", sets, "override config entries, key=value");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--checkpoint-dt", checkpoint_dt, "checkpoint interval (s)");
  run->add_option("--restart-from", restart_from, "checkpoint basename to resume from");
  run->add_option("--t-end", t_end, "override end time (s)");
  run->add_option("--max-steps", max_steps, "hard step cap");
  run->add_flag("--closed-box", closed_box, "replace the channel ends by stationary walls");
  run->add_flag("-v,--verbose", verbose);

  auto* sweep = app.add_subcommand("sweep", "run an epsilon sweep");
  sweep->add_option("--case", case_name)->required();
  sweep->add_option("--set", sets);
  sweep->add_option("--eps", eps_csv, "comma-separated epsilon list")->required();
  sweep->add_option("--out", out_dir)->required();
  sweep->add_option("--t-end", t_end);

  auto* analyze = app.add_subcommand("analyze", "fits on (eps, value) CSV data");
  auto* fitexp = analyze->add_subcommand("fit-exp", "fit a*exp(b*eps)*eps^c");
  fitexp->add_option("file", file_arg, "CSV with eps,value columns")->required();
  auto* extrap = analyze->add_subcommand("extrapolate", "quadratic extrapolation to eps = 0");
  extrap->add_option("file", file_arg, "CSV with eps,value columns")->required();
  analyze->require_subcommand(1);

  auto* compare = app.add_subcommand("compare", "compare run/sweep output to a reference table");
  compare->add_option("--fixture", fixture_id, "table2|table3|table4|table5 (or *_s1/_s2)")
      ->required();
  compare->add_option("dir", in_dir, "run or sweep output directory")->required();

  auto* wedge = app.add_subcommand("wedge", "triple-wedge classification of a finished run");
  wedge->add_option("dir", in_dir, "run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const CaseConfig c = load_with_overrides(case_name, sets);
      save_config(c, out_dir);
      RunOptions o;
      o.out_dir = out_dir;
      o.checkpoint_dt = checkpoint_dt;
      o.restart_from = restart_from;
      o.closed_box = closed_box;
      o.max_steps = max_steps;
      o.t_end_override = t_end;
      o.quiet = !verbose;
      const RunResult r = run_case(c, o);
      std::printf("status %s  t %.6g  steps %ld  dx %.6g  theta %.6g  F_S %.6g  div %.3g\n",
                  to_string(r.status), r.t_final, r.steps, r.final_qoi.dx_bottom,
                  r.final_qoi.theta_mid, r.final_qoi.f_s, r.final_qoi.div_max);
      if (r.status == RunStatus::failed) return 3;
      return 0;
    }
    if (*sweep) {
      const CaseConfig base = load_with_overrides(case_name, sets);
      save_config(base, out_dir);
      std::vector<double> eps;
      std::stringstream ss(eps_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) eps.push_back(std::stod(tok));
      RunOptions o;
      o.out_dir = out_dir;
      o.t_end_override = t_end;
      const SweepResult r = sweep_epsilon(base, eps, o);
      for (const auto& row : r.rows)
        std::printf("eps %.4g  %s  dx %.6g  theta %.6g  F_S %.6g\n", row.eps,
                    to_string(row.status), row.q.dx_bottom, row.q.theta_mid, row.q.f_s);
      if (r.extrap_dx)
        std::printf("extrapolated dx(0) %.6g  theta(0) %.6g  F_S(0) %.6g\n",
                    r.extrap_dx->value_at_zero, r.extrap_theta->value_at_zero,
                    r.extrap_fs->value_at_zero);
      if (r.expfit_fs)
        std::printf("exponential fit of F_S: a %.6g  b %.6g  c %.6g\n", r.expfit_fs->a,
                    r.expfit_fs->b, r.expfit_fs->c);
      for (const auto& row : r.rows)
        if (row.status == RunStatus::failed) return 3;
      return 0;
    }
    if (*fitexp) {
      const auto rows = read_two_column_csv(file_arg);
      std::vector<double> e, f;
      for (auto& [a, b] : rows) {
        e.push_back(a);
        f.push_back(b);
      }
      const FitResult r = fit_exponential(e, f);
      json j = {{"a", r.a}, {"b", r.b}, {"c", r.c}, {"residual_norm", r.residual_norm}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*extrap) {
      auto rows = read_two_column_csv(file_arg);
      if (rows.size() < 3) throw ConfigError("extrapolate needs at least three rows");
      std::sort(rows.begin(), rows.end(),
                [](auto& a, auto& b) { return a.first > b.first; });
      const size_t n = rows.size();
      const FitResult r = extrapolate_quadratic(
          {rows[n - 3].first, rows[n - 2].first, rows[n - 1].first},
          {rows[n - 3].second, rows[n - 2].second, rows[n - 1].second});
      json j = {{"quad", {r.quad[0], r.quad[1], r.quad[2]}},
                {"value_at_zero", r.value_at_zero}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*compare) {
      CaseConfig cfg;
      bool have_cfg = fs::exists(fs::path(in_dir) / "config.json");
      const auto pts = load_sim_points(in_dir, &cfg);
      const PaperFixture& f = resolve_fixture(fixture_id, have_cfg ? &cfg : nullptr);
      const CompareReport rep = compare_to_fixture(f, pts);
      std::cout << rep.text;
      std::ofstream(fs::path(in_dir) / "compare.json") << rep.json << "\n";
      return rep.pass ? 0 : 1;
    }
    if (*wedge) {
      const CaseConfig c = load_config_file((fs::path(in_dir) / "config.json").string());
      StaggeredGrid g;
      const State s = read_snapshot((fs::path(in_dir) / "final.snap").string(), g);
      const WedgeReport w = triple_wedge_report(g, s, c);
      json j = {{"classification", w.classification},
                {"mean_tangential", w.mean_tangential},
                {"viscosity_ratio", w.viscosity_ratio},
                {"critical_ratio", w.r_c}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const AnalysisError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SolverFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
