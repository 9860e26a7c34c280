#pragma once
// Reference-table fixtures for the Couette benchmark: equilibrated
// contact-point displacement, mid-box angle, and excess shear force for the
// published parameter sweeps, plus the sharp-interface reference rows.

#include <optional>
#include <string>
#include <vector>

namespace nschwet {

struct FixtureRow {
  double eps = 0.0;       // interface thickness (m); 0 for limit rows
  double u_wall = 0.0;    // wall speed (m/s) where the table sweeps it
  double dx = 0.0;        // contact displacement (m)
  double theta = 0.0;     // mid-box angle (rad)
  double f_s = 0.0;       // excess shear force (kg m / s^2)
  bool sharp_interface = false;
  bool extrapolated = false;
};

struct PaperFixture {
  std::string id;          // e.g. "table5_s2"
  std::string case_name;   // preset it belongs to
  double slip_length = 0;  // s_m or s_nu of the column set (m)
  std::vector<FixtureRow> rows;
  // tolerance class A: relative tolerances for dx, theta, f_s
  double tol_dx = 0.15, tol_theta = 0.15, tol_fs = 0.20;
};

const std::vector<PaperFixture>& all_fixtures();
const PaperFixture& fixture(const std::string& id);

// nearest row by eps (simulation rows only)
const FixtureRow* find_row(const PaperFixture& f, double eps, double u_wall = -1.0);

}  // namespace nschwet
