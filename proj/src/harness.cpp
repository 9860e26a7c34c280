#include "nschwet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <semaphore>
#include <sstream>

#include "json.hpp"
#include "nschwet/cahnhilliard.hpp"
#include "nschwet/navierstokes.hpp"

namespace nschwet {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::equilibrated: return "equilibrated";
    case RunStatus::finished: return "finished_not_equilibrated";
    case RunStatus::escaped: return "escaped";
    case RunStatus::failed: return "failed";
  }
  return "?";
}

State make_initial_state(const StaggeredGrid& g, const CaseConfig& c) {
  State s = State::make(g);
  const InterfaceProfile p =
      InterfaceProfile::vertical(c.channel.interface_x0, c.interface.epsilon);
  for (int i = -1; i <= g.nx; ++i)
    for (int j = -1; j <= g.ny; ++j) {
      const double x = (i < 0) ? -g.xc[0] : (i >= g.nx ? 2.0 * g.lx - g.xc[g.nx - 1] : g.xc[i]);
      s.phi.at(i, j) = p.value(x, 0.0);
    }
  return s;
}

void write_checkpoint(const std::string& basename, const StaggeredGrid& g, const State& s,
                      long steps, double dt, int halvings,
                      const std::vector<double>& trace_bot,
                      const std::vector<double>& trace_top) {
  write_snapshot(basename + ".snap", g, s);
  json j;
  j["t"] = s.t;
  j["steps"] = steps;
  j["dt"] = dt;
  j["halvings"] = halvings;
  if (!trace_bot.empty()) {
    j["trace_bot"] = trace_bot;
    j["trace_top"] = trace_top;
  }
  std::ofstream out(basename + ".json");
  out << j.dump(2) << "\n";
}

namespace {

struct EquilDetector {
  // relative change of (dx, theta, F_S) over a 0.5 s window below equil_tol
  double window = 0.5;
  double tol = 1e-4;
  std::deque<QoiRecord> hist;
  bool check(const QoiRecord& q, double ramp_time) {
    hist.push_back(q);
    while (hist.size() > 1 && hist.front().t < q.t - window - 1e-12) hist.pop_front();
    if (q.t < ramp_time + window) return false;
    if (hist.front().t > q.t - window + 1e-12) return false;
    const QoiRecord& ref = hist.front();
    auto settled = [&](double a, double b, double floor) {
      return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), floor});
    };
    return settled(q.dx_bottom, ref.dx_bottom, 1e-9) &&
           settled(q.theta_mid, ref.theta_mid, 1e-8) && settled(q.f_s, ref.f_s, 1e-12);
  }
};

double velocity_scale(const CaseConfig& c) {
  const double eta_bar = std::sqrt(c.fluids.eta_l * c.fluids.eta_a);
  return std::max(c.channel.u_wall_max, 1e-3 * c.fluids.sigma_la / eta_bar);
}

double cp_dist(const QoiRecord& q, const CaseConfig& c) {
  const double xb = c.channel.interface_x0 + q.dx_bottom;
  const double xt = c.channel.interface_x0 + q.dx_top;
  return std::min(xb, xt);
}

double cp_far(const QoiRecord& q, const CaseConfig& c) {
  const double xb = c.channel.interface_x0 + q.dx_bottom;
  const double xt = c.channel.interface_x0 + q.dx_top;
  return std::max(xb, xt);
}

}  // namespace

RunResult run_case(const CaseConfig& c, const RunOptions& opts) {
  c.validate();
  RunResult rr;
  fs::create_directories(opts.out_dir);

  const StaggeredGrid g = StaggeredGrid::build(c);
  const CosineBasisY basis = CosineBasisY::make(g.ny, g.dy);
  const MaterialLaws laws(c.fluids, c.wetting);
  ChStepper ch(g, basis);
  NsStepper ns(g, basis);

  NsContext ctx;
  ctx.laws = &laws;
  ctx.wetting = &c.wetting;
  ctx.channel = &c.channel;
  ctx.eps = c.interface.epsilon;
  ctx.closed_box = opts.closed_box;

  ChCoeffs chc;
  chc.m = c.interface.mobility;
  chc.eps = c.interface.epsilon;
  chc.sigma = c.sigma();
  chc.stab_s = c.numerics.stab_s;
  chc.lin_tol = c.numerics.lin_tol_ch;

  NsStepper::Coeffs nsc;
  nsc.lin_tol_v = c.numerics.lin_tol_ch;
  nsc.lin_tol_p = c.numerics.lin_tol_p;
  nsc.div_target = 1e-10 * velocity_scale(c) / c.channel.ell();
  nsc.jflux_c = laws.matched_density() ? 0.0 : laws.jflux_coefficient(c.interface.mobility);

  double dt = c.numerics.dt;
  long steps = 0;
  int halvings = 0;
  State s;
  if (!opts.restart_from.empty()) {
    StaggeredGrid gin;
    s = read_snapshot(opts.restart_from + ".snap", gin);
    if (gin.nx != g.nx || gin.ny != g.ny)
      throw ConfigError("restart grid does not match the configuration");
    std::ifstream meta(opts.restart_from + ".json");
    if (meta) {
      json j;
      meta >> j;
      steps = j.value("steps", 0L);
      dt = j.value("dt", dt);
      halvings = j.value("halvings", 0);
      if (j.contains("trace_bot")) {
        ch.trace_bot = j["trace_bot"].get<std::vector<double>>();
        ch.trace_top = j["trace_top"].get<std::vector<double>>();
      }
    }
  } else {
    s = make_initial_state(g, c);
  }

  // initial ghost application
  {
    std::vector<double> gb, gt;
    ch.wall_flux(s.phi, s.u, laws, c.wetting, chc, gb, gt);
    apply_wetting_bc_phi(s.phi, g, laws, chc, gb, gt);
    apply_mu_bc(s.mu);
    ns.fill_velocity_ghosts(s, ctx, s.t);
    NsStepper::fill_p_ghosts(s.p);
  }

  const double t_end = opts.t_end_override > 0 ? opts.t_end_override : c.numerics.t_end;
  const double sample_dt = c.numerics.sample_dt;
  const double mass0 = total_mass(g, s.phi);

  std::ofstream csv(fs::path(opts.out_dir) / "qoi.csv");
  csv << qoi_csv_header() << "\n";

  EquilDetector detector;
  detector.tol = c.numerics.equil_tol;

  auto make_qoi = [&](const State& before, const State& after, double step_dt) {
    QoiRecord q;
    q.t = after.t;
    q.energy = energy(g, after, laws, c.interface.epsilon);
    q.mass = total_mass(g, after.phi);
    const ContactPoints cp = contact_points(g, after.phi);
    q.contact_error = !cp.ok;
    q.dx_bottom = cp.x_bottom - c.channel.interface_x0;
    q.dx_top = cp.x_top - c.channel.interface_x0;
    try {
      q.theta_mid = midbox_angle(g, after.phi, c.channel);
    } catch (const ConfigError&) {
      q.contact_error = true;
    }
    q.f_s = shear_force_excess(g, after, laws, c.wetting, c.channel, c.interface.epsilon,
                               after.t, opts.closed_box);
    q.div_max = ns.last_div_max;
    if (step_dt > 0) {
      const BudgetTerms b =
          dissipation_budget(g, before, after, step_dt, laws, c.wetting, c.channel,
                             c.interface.epsilon, c.interface.mobility, opts.closed_box);
      q.budget_residual = b.residual;
    }
    return q;
  };

  {
    const QoiRecord q0 = make_qoi(s, s, 0.0);
    csv << qoi_csv_row(q0) << "\n";
    rr.final_qoi = q0;
  }

  RunStatus status = RunStatus::finished;
  double next_sample = std::floor(s.t / sample_dt + 1e-9) * sample_dt + sample_dt;
  double next_checkpoint =
      opts.checkpoint_dt > 0 ? std::floor(s.t / opts.checkpoint_dt + 1e-9) * opts.checkpoint_dt +
                                   opts.checkpoint_dt
                             : 0.0;
  State backup = s;
  State prev_sample_state = s;

  while (s.t < t_end - 1e-12) {
    if (opts.max_steps >= 0 && steps >= opts.max_steps) break;
    const bool is_sample = (s.t + dt >= next_sample - 1e-12) || (s.t + dt >= t_end - 1e-12);
    backup = s;
    try {
      Field phi_old = s.phi;
      ch.step(s, laws, c.wetting, chc);
      nsc.dt = dt;
      ns.step(s, phi_old, ctx, nsc);
      s.t += dt;
      ++steps;
    } catch (const SolverFailure&) {
      s = backup;
      if (++halvings > 5) {
        status = RunStatus::failed;
        break;
      }
      dt *= 0.5;
      chc.dt = dt;
      continue;
    }
    chc.dt = dt;

    if (is_sample) {
      const QoiRecord q = make_qoi(backup, s, dt);
      csv << qoi_csv_row(q) << "\n";
      rr.final_qoi = q;
      prev_sample_state = s;
      while (next_sample <= s.t + 1e-12) next_sample += sample_dt;
      if (q.contact_error) {
        status = RunStatus::escaped;
        break;
      }
      const double margin = 5.0 * c.interface.epsilon;
      if (std::min(cp_dist(q, c), g.lx - cp_far(q, c)) < margin) {
        status = RunStatus::escaped;
        break;
      }
      if (!(q.mass == q.mass) || !std::isfinite(q.energy)) {
        status = RunStatus::failed;
        break;
      }
      if (detector.check(q, c.channel.ramp_time) && !opts.closed_box) {
        status = RunStatus::equilibrated;
        break;
      }
    }
    if (opts.checkpoint_dt > 0 && s.t >= next_checkpoint - 1e-12) {
      const std::string base =
          (fs::path(opts.out_dir) / ("checkpoint_" + std::to_string(steps))).string();
      write_checkpoint(base, g, s, steps, dt, halvings, ch.trace_bot, ch.trace_top);
      next_checkpoint += opts.checkpoint_dt;
    }
  }

  (void)mass0;
  rr.status = status;
  rr.t_final = s.t;
  rr.steps = steps;
  rr.dt_halvings = halvings;
  rr.qoi_csv = (fs::path(opts.out_dir) / "qoi.csv").string();
  rr.final_snapshot = (fs::path(opts.out_dir) / "final.snap").string();
  write_snapshot(rr.final_snapshot, g, s);
  write_checkpoint((fs::path(opts.out_dir) / "final").string(), g, s, steps, dt, halvings,
                   ch.trace_bot, ch.trace_top);

  json j;
  j["status"] = to_string(status);
  j["t_final"] = rr.t_final;
  j["steps"] = rr.steps;
  j["dt_halvings"] = rr.dt_halvings;
  j["eps"] = c.interface.epsilon;
  j["u_wall_max"] = c.channel.u_wall_max;
  j["qoi"] = {{"t", rr.final_qoi.t},
              {"E", rr.final_qoi.energy},
              {"mass", rr.final_qoi.mass},
              {"dx_bottom", rr.final_qoi.dx_bottom},
              {"dx_top", rr.final_qoi.dx_top},
              {"theta_mid", rr.final_qoi.theta_mid},
              {"F_S", rr.final_qoi.f_s},
              {"div_max", rr.final_qoi.div_max}};
  std::ofstream(fs::path(opts.out_dir) / "run.json") << j.dump(2) << "\n";
  return rr;
}

SweepResult sweep_epsilon(const CaseConfig& base, const std::vector<double>& eps_list,
                          const RunOptions& opts) {
  if (eps_list.empty()) throw ConfigError("sweep requires a nonempty eps list");
  fs::create_directories(opts.out_dir);

  int max_threads = static_cast<int>(std::min<size_t>(eps_list.size(), 8));
  if (const char* e = std::getenv("NSCHWET_THREADS")) {
    const int v = std::atoi(e);
    if (v >= 1) max_threads = std::min<int>(v, static_cast<int>(eps_list.size()));
  }
  std::counting_semaphore<64> slots(max_threads);

  std::vector<std::future<SweepRow>> futs;
  for (const double eps : eps_list) {
    futs.push_back(std::async(std::launch::async, [&, eps]() {
      slots.acquire();
      SweepRow row;
      row.eps = eps;
      try {
        CaseConfig c = base;
        c.interface.epsilon = eps;
        c.interface.resolve_mobility();
        RunOptions ro = opts;
        std::ostringstream dir;
        dir << opts.out_dir << "/eps_" << eps;
        ro.out_dir = dir.str();
        const RunResult r = run_case(c, ro);
        row.status = r.status;
        row.q = r.final_qoi;
      } catch (const std::exception&) {
        row.status = RunStatus::failed;
      }
      slots.release();
      return row;
    }));
  }
  SweepResult out;
  for (auto& f : futs) out.rows.push_back(f.get());
  std::sort(out.rows.begin(), out.rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.eps > b.eps; });

  // assemble table
  std::ostringstream csv;
  csv << "eps,status,dx_bottom,dx_top,theta_mid,F_S\n";
  for (const auto& r : out.rows)
    csv << r.eps << "," << to_string(r.status) << "," << r.q.dx_bottom << "," << r.q.dx_top << ","
        << r.q.theta_mid << "," << r.q.f_s << "\n";
  out.csv_path = (fs::path(opts.out_dir) / "sweep.csv").string();
  std::ofstream(out.csv_path) << csv.str();

  // extrapolate the last three eps (smallest) when available and convergent;
  // fit the exponential divergence model when |dx| increases as eps shrinks
  std::vector<const SweepRow*> good;
  for (const auto& r : out.rows)
    if (r.status == RunStatus::equilibrated || r.status == RunStatus::finished)
      good.push_back(&r);
  if (good.size() >= 3) {
    const size_t n = good.size();
    const std::array<double, 3> e3 = {good[n - 3]->eps, good[n - 2]->eps, good[n - 1]->eps};
    auto ex = [&](auto getter) {
      return extrapolate_quadratic(
          e3, {getter(good[n - 3]->q), getter(good[n - 2]->q), getter(good[n - 1]->q)});
    };
    out.extrap_dx = ex([](const QoiRecord& q) { return std::fabs(q.dx_bottom); });
    out.extrap_theta = ex([](const QoiRecord& q) { return std::fabs(q.theta_mid); });
    out.extrap_fs = ex([](const QoiRecord& q) { return q.f_s; });
    bool divergent = true;
    for (size_t k = 1; k < n; ++k)
      divergent = divergent && std::fabs(good[k]->q.dx_bottom) >
                                   std::fabs(good[k - 1]->q.dx_bottom) * 1.2;
    if (divergent) {
      std::vector<double> ee, ff;
      for (const auto* r : good) {
        ee.push_back(r->eps);
        ff.push_back(std::fabs(r->q.f_s));
      }
      try {
        out.expfit_fs = fit_exponential(ee, ff);
      } catch (const AnalysisError&) {
      }
    }
  }

  json j;
  j["rows"] = json::array();
  for (const auto& r : out.rows)
    j["rows"].push_back({{"eps", r.eps},
                         {"status", to_string(r.status)},
                         {"dx_bottom", r.q.dx_bottom},
                         {"dx_top", r.q.dx_top},
                         {"theta_mid", r.q.theta_mid},
                         {"F_S", r.q.f_s}});
  auto put_fit = [&](const char* key, const std::optional<FitResult>& f, bool quad) {
    if (!f) return;
    if (quad)
      j[key] = {{"quad", {f->quad[0], f->quad[1], f->quad[2]}},
                {"value_at_zero", f->value_at_zero}};
    else
      j[key] = {{"a", f->a}, {"b", f->b}, {"c", f->c}, {"residual_norm", f->residual_norm}};
  };
  put_fit("extrapolation_dx", out.extrap_dx, true);
  put_fit("extrapolation_theta", out.extrap_theta, true);
  put_fit("extrapolation_fs", out.extrap_fs, true);
  put_fit("exponential_fit_fs", out.expfit_fs, false);
  out.json_path = (fs::path(opts.out_dir) / "sweep.json").string();
  std::ofstream(out.json_path) << j.dump(2) << "\n";
  return out;
}

WedgeReport triple_wedge_report(const StaggeredGrid& g, const State& s, const CaseConfig& c) {
  WedgeReport w;
  w.viscosity_ratio = c.fluids.eta_a / c.fluids.eta_l;
  w.r_c = critical_viscosity_ratio(c.wetting.theta_eq);
  const int nx = g.nx, ny = g.ny;

  // interface abscissa per row
  std::vector<double> xint(ny, std::nan(""));
  for (int j = 0; j < ny; ++j) {
    int count = 0;
    for (int i = 0; i < nx - 1; ++i) {
      const double a = s.phi.at(i, j), b = s.phi.at(i + 1, j);
      if (a == 0.0 || a * b < 0.0) {
        xint[j] = (a == 0.0) ? g.xc[i] : g.xc[i] + a * (g.xc[i + 1] - g.xc[i]) / (a - b);
        ++count;
      }
    }
    if (count != 1) xint[j] = std::nan("");
  }

  auto interp_u = [&](double x, double y) {
    // u at x-faces: locate face interval and y row
    int i = 0;
    while (i < nx - 1 && g.xf[i + 1] < x) ++i;
    const double tx = (x - g.xf[i]) / (g.xf[i + 1] - g.xf[i]);
    int j = 0;
    while (j < ny - 2 && g.yc[j + 1] < y) ++j;
    const double ty = std::clamp((y - g.yc[j]) / (g.yc[j + 1] - g.yc[j]), 0.0, 1.0);
    return (1 - tx) * ((1 - ty) * s.u.at(i, j) + ty * s.u.at(i, j + 1)) +
           tx * ((1 - ty) * s.u.at(i + 1, j) + ty * s.u.at(i + 1, j + 1));
  };
  auto interp_v = [&](double x, double y) {
    int i = 0;
    while (i < nx - 2 && g.xc[i + 1] < x) ++i;
    const double tx = std::clamp((x - g.xc[i]) / (g.xc[i + 1] - g.xc[i]), 0.0, 1.0);
    int j = 0;
    while (j < ny - 1 && g.yf[j + 1] < y) ++j;
    const double ty = (y - g.yf[j]) / (g.yf[j + 1] - g.yf[j]);
    return (1 - tx) * ((1 - ty) * s.v.at(i, j) + ty * s.v.at(i, j + 1)) +
           tx * ((1 - ty) * s.v.at(i + 1, j) + ty * s.v.at(i + 1, j + 1));
  };

  double acc = 0.0;
  int n = 0;
  for (int j = 1; j < ny - 1; ++j) {
    if (g.yc[j] < 0.25 * g.ly || g.yc[j] > 0.75 * g.ly) continue;
    if (std::isnan(xint[j]) || std::isnan(xint[j - 1]) || std::isnan(xint[j + 1])) continue;
    const double dxdy = (xint[j + 1] - xint[j - 1]) / (2.0 * g.dy);
    const double norm = std::sqrt(1.0 + dxdy * dxdy);
    const double tx = dxdy / norm, ty = 1.0 / norm;  // tangent toward the top wall
    const double uu = interp_u(xint[j], g.yc[j]);
    const double vv = interp_v(xint[j], g.yc[j]);
    acc += uu * tx + vv * ty;
    ++n;
  }
  w.mean_tangential = n > 0 ? acc / n : 0.0;
  const double thr = 1e-3 * std::max(c.channel.u_wall_max, 1e-30);
  if (w.mean_tangential > thr)
    w.classification = "middle_wedge_ambient";
  else if (w.mean_tangential < -thr)
    w.classification = "middle_wedge_liquid";
  else
    w.classification = "near_critical";
  return w;
}

CompareReport compare_to_fixture(const PaperFixture& f, const std::vector<SimPoint>& points) {
  CompareReport rep;
  rep.fixture_id = f.id;
  rep.pass = true;
  std::ostringstream txt;
  txt << "fixture " << f.id << " (tolerances dx " << f.tol_dx * 100 << "%, theta "
      << f.tol_theta * 100 << "%, F_S " << f.tol_fs * 100 << "%)\n";
  json jrows = json::array();
  for (const auto& p : points) {
    const FixtureRow* row = find_row(f, p.eps, p.u_wall > 0 ? p.u_wall : -1.0);
    if (!row) continue;
    CompareEntry e;
    e.eps = p.eps;
    e.u_wall = row->u_wall;
    e.dx_rel = std::fabs(std::fabs(p.q.dx_bottom) - row->dx) / row->dx;
    e.theta_rel = std::fabs(std::fabs(p.q.theta_mid) - row->theta) / row->theta;
    e.fs_rel = std::fabs(p.q.f_s - row->f_s) / row->f_s;
    e.pass = e.dx_rel <= f.tol_dx && e.theta_rel <= f.tol_theta && e.fs_rel <= f.tol_fs;
    rep.pass = rep.pass && e.pass;
    rep.entries.push_back(e);
    char line[256];
    std::snprintf(line, sizeof(line),
                  "  eps %.4g uw %.4g: dx %+.1f%%  theta %+.1f%%  F_S %+.1f%%  [%s]\n", e.eps,
                  e.u_wall, 100 * (std::fabs(p.q.dx_bottom) - row->dx) / row->dx,
                  100 * (std::fabs(p.q.theta_mid) - row->theta) / row->theta,
                  100 * (p.q.f_s - row->f_s) / row->f_s, e.pass ? "pass" : "FAIL");
    txt << line;
    jrows.push_back({{"eps", e.eps},
                     {"u_wall", e.u_wall},
                     {"dx_rel", e.dx_rel},
                     {"theta_rel", e.theta_rel},
                     {"fs_rel", e.fs_rel},
                     {"pass", e.pass}});
  }
  if (rep.entries.empty()) {
    rep.pass = false;
    txt << "  no matching fixture rows\n";
  }
  txt << (rep.pass ? "PASS" : "FAIL") << "\n";
  rep.text = txt.str();
  json j;
  j["fixture"] = f.id;
  j["pass"] = rep.pass;
  j["rows"] = jrows;
  rep.json = j.dump(2);
  return rep;
}

}  // namespace nschwet
