#pragma once
// Simulation driver: named presets, the coupled CH/NS time loop with ramped
// walls, QoI sampling, equilibration and escape detection, dt halving on
// solver failure, checkpoint/restart, epsilon sweeps with extrapolation and
// divergence fits, triple-wedge classification, and fixture comparison.

#include <optional>
#include <string>
#include <vector>

#include "nschwet/analysis.hpp"
#include "nschwet/diagnostics.hpp"
#include "nschwet/fixtures.hpp"
#include "nschwet/grid.hpp"

namespace nschwet {

enum class RunStatus { equilibrated, finished, escaped, failed };
const char* to_string(RunStatus s);

struct RunOptions {
  std::string out_dir;
  double checkpoint_dt = 0.0;    // 0: only the final snapshot
  std::string restart_from;      // checkpoint basename (without extension)
  bool closed_box = false;
  bool quiet = true;
  long max_steps = -1;           // optional hard cap (tests)
  double t_end_override = 0.0;   // 0: use config
};

struct RunResult {
  RunStatus status = RunStatus::failed;
  QoiRecord final_qoi;
  double t_final = 0.0;
  long steps = 0;
  int dt_halvings = 0;
  std::string qoi_csv;
  std::string final_snapshot;
};

// Initial state per the benchmark setup: centered vertical tanh profile,
// fluid at rest.
State make_initial_state(const StaggeredGrid& g, const CaseConfig& c);

RunResult run_case(const CaseConfig& c, const RunOptions& opts);

struct SweepRow {
  double eps = 0.0;
  RunStatus status = RunStatus::failed;
  QoiRecord q;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<FitResult> extrap_dx, extrap_theta, extrap_fs;  // last three eps
  std::optional<FitResult> expfit_fs;                           // divergent series
  std::string csv_path, json_path;
};

SweepResult sweep_epsilon(const CaseConfig& base, const std::vector<double>& eps_list,
                          const RunOptions& opts);

struct WedgeReport {
  double mean_tangential = 0.0;  // interface-tangential velocity, +y oriented
  double viscosity_ratio = 0.0;  // eta_a / eta_l
  double r_c = 0.0;              // critical ratio at theta_eq
  std::string classification;    // middle_wedge_ambient | middle_wedge_liquid | near_critical
};

WedgeReport triple_wedge_report(const StaggeredGrid& g, const State& s, const CaseConfig& c);

struct CompareEntry {
  double eps = 0.0, u_wall = 0.0;
  double dx_rel = 0.0, theta_rel = 0.0, fs_rel = 0.0;
  bool pass = false;
};

struct CompareReport {
  std::string fixture_id;
  std::vector<CompareEntry> entries;
  bool pass = false;
  std::string text;
  std::string json;
};

struct SimPoint {
  double eps = 0.0, u_wall = 0.0;
  QoiRecord q;
};

CompareReport compare_to_fixture(const PaperFixture& f, const std::vector<SimPoint>& points);

// checkpoint sidecar I/O (snapshot + json with step counters and dt state)
void write_checkpoint(const std::string& basename, const StaggeredGrid& g, const State& s,
                      long steps, double dt, int halvings,
                      const std::vector<double>& trace_bot, const std::vector<double>& trace_top);

}  // namespace nschwet
