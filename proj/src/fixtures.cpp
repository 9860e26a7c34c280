#include "nschwet/fixtures.hpp"

#include <cmath>
#include <stdexcept>

namespace nschwet {

namespace {

// values transcribed as printed (units converted to SI at the stated scales)
std::vector<PaperFixture> build() {
  std::vector<PaperFixture> v;
  auto eps_row = [](int k) { return 1.6e-3 * std::pow(2.0, -k); };

  {  // no-slip, fixed mobility, s_m = 2 mm
    PaperFixture f;
    f.id = "table2_s2";
    f.case_name = "1A";
    f.slip_length = 2e-3;
    const double dx[6] = {5.101, 5.380, 5.566, 5.685, 5.756, 5.795};
    const double th[6] = {7.602, 7.881, 8.060, 8.176, 8.248, 8.288};
    const double fs[6] = {3.078, 3.228, 3.334, 3.403, 3.445, 3.468};
    for (int k = 0; k < 6; ++k)
      f.rows.push_back({eps_row(k), 4e-3, dx[k] * 1e-4, th[k] * 1e-2, fs[k] * 1e-3, false, false});
    f.rows.push_back({0.0, 4e-3, 6.171e-4, 7.836e-2, 3.077e-3, true, false});
    v.push_back(f);
  }
  {  // no-slip, fixed mobility, s_m = 1 mm
    PaperFixture f;
    f.id = "table2_s1";
    f.case_name = "1A_1mm";
    f.slip_length = 1e-3;
    const double dx[6] = {9.098, 9.226, 9.407, 9.568, 9.680, 9.748};
    const double th[6] = {12.56, 12.43, 12.52, 12.65, 12.75, 12.81};
    const double fs[6] = {5.469, 5.516, 5.613, 5.704, 5.770, 5.810};
    for (int k = 0; k < 6; ++k)
      f.rows.push_back({eps_row(k), 4e-3, dx[k] * 1e-4, th[k] * 1e-2, fs[k] * 1e-3, false, false});
    f.rows.push_back({0.0, 4e-3, 8.848e-4, 10.94e-2, 4.801e-3, true, false});
    v.push_back(f);
  }
  {  // wall-speed sweep at eps = 50 um, s = 2 mm
    PaperFixture f;
    f.id = "table3_s2";
    f.case_name = "1B";
    f.slip_length = 2e-3;
    const double uws[4] = {8e-3, 4e-3, 2e-3, 1e-3};
    const double dx[4] = {11.75, 5.795, 2.887, 1.442};
    const double th[4] = {16.75, 8.288, 4.133, 2.057};
    const double fs[4] = {69.76, 34.68, 17.31, 8.651};
    const double dxs[4] = {12.53, 6.171, 3.075, 1.536};
    const double ths[4] = {15.86, 7.836, 3.907, 1.952};
    const double fss[4] = {61.93, 30.77, 15.36, 7.678};
    for (int k = 0; k < 4; ++k) {
      f.rows.push_back({5e-5, uws[k], dx[k] * 1e-4, th[k] * 1e-2, fs[k] * 1e-4, false, false});
      f.rows.push_back({0.0, uws[k], dxs[k] * 1e-4, ths[k] * 1e-2, fss[k] * 1e-4, true, false});
    }
    v.push_back(f);
  }
  {  // wall-speed sweep at eps = 50 um, s = 1 mm
    PaperFixture f;
    f.id = "table3_s1";
    f.case_name = "1B_1mm";
    f.slip_length = 1e-3;
    const double uws[4] = {8e-3, 4e-3, 2e-3, 1e-3};
    const double dx[4] = {20.26, 9.748, 4.831, 2.410};
    const double th[4] = {26.38, 12.81, 6.364, 3.177};
    const double fs[4] = {118.1, 58.10, 28.94, 14.46};
    const double dxs[4] = {18.22, 8.848, 4.393, 2.193};
    const double ths[4] = {22.39, 10.94, 5.439, 2.716};
    const double fss[4] = {97.25, 48.01, 23.93, 11.96};
    for (int k = 0; k < 4; ++k) {
      f.rows.push_back({5e-5, uws[k], dx[k] * 1e-4, th[k] * 1e-2, fs[k] * 1e-4, false, false});
      f.rows.push_back({0.0, uws[k], dxs[k] * 1e-4, ths[k] * 1e-2, fss[k] * 1e-4, true, false});
    }
    v.push_back(f);
  }
  {  // mobility-induced divergence, m ~ eps^2
    PaperFixture f;
    f.id = "table4";
    f.case_name = "1C";
    f.slip_length = 0.0;
    const double dx[6] = {1.550, 6.811, 23.74, 56.85, 96.80, 140.5};
    const double th[6] = {2.409, 10.54, 36.02, 81.76, 127.5, 171.2};
    const double fs[6] = {9.372, 41.01, 142.5, 340.3, 577.0, 832.5};
    for (int k = 0; k < 6; ++k)
      f.rows.push_back({eps_row(k), 4e-3, dx[k] * 1e-5, th[k] * 1e-3, fs[k] * 1e-5, false, false});
    v.push_back(f);
  }
  {  // GNBC convergence, s_nu = 2 mm
    PaperFixture f;
    f.id = "table5_s2";
    f.case_name = "2A";
    f.slip_length = 2e-3;
    const double dx[6] = {6.443, 6.393, 6.291, 6.224, 6.192, 6.178};
    const double th[6] = {8.255, 8.074, 7.948, 7.882, 7.852, 7.840};
    const double fs[6] = {3.258, 3.205, 3.143, 3.105, 3.088, 3.081};
    for (int k = 0; k < 6; ++k) {
      const double eps = 1e-4 * std::pow(2.0, 4 - k);
      f.rows.push_back({eps, 4e-3, dx[k] * 1e-4, th[k] * 1e-2, fs[k] * 1e-3, false, false});
    }
    f.rows.push_back({0.0, 4e-3, 6.167e-4, 7.831e-2, 3.075e-3, false, true});
    f.rows.push_back({0.0, 4e-3, 6.171e-4, 7.836e-2, 3.077e-3, true, false});
    v.push_back(f);
  }
  {  // GNBC convergence, s_nu = 1 mm
    PaperFixture f;
    f.id = "table5_s1";
    f.case_name = "2A_1mm";
    f.slip_length = 1e-3;
    const double dx[6] = {8.957, 9.140, 9.065, 8.962, 8.898, 8.870};
    const double th[6] = {11.27, 11.27, 11.15, 11.04, 10.98, 10.96};
    const double fs[6] = {4.924, 4.984, 4.927, 4.866, 4.829, 4.813};
    for (int k = 0; k < 6; ++k) {
      const double eps = 1e-4 * std::pow(2.0, 4 - k);
      f.rows.push_back({eps, 4e-3, dx[k] * 1e-4, th[k] * 1e-2, fs[k] * 1e-3, false, false});
    }
    f.rows.push_back({0.0, 4e-3, 8.845e-4, 10.93e-2, 4.800e-3, false, true});
    f.rows.push_back({0.0, 4e-3, 8.848e-4, 10.94e-2, 4.801e-3, true, false});
    v.push_back(f);
  }
  return v;
}

}  // namespace

const std::vector<PaperFixture>& all_fixtures() {
  static const std::vector<PaperFixture> fx = build();
  return fx;
}

const PaperFixture& fixture(const std::string& id) {
  for (const auto& f : all_fixtures())
    if (f.id == id) return f;
  throw std::runtime_error("unknown fixture \"" + id + "\"");
}

const FixtureRow* find_row(const PaperFixture& f, double eps, double u_wall) {
  const FixtureRow* best = nullptr;
  double bestrel = 0.05;
  for (const auto& r : f.rows) {
    if (r.sharp_interface || r.extrapolated || r.eps == 0.0) continue;
    if (u_wall > 0 && std::fabs(r.u_wall - u_wall) > 1e-12 * u_wall) continue;
    const double rel = std::fabs(r.eps - eps) / eps;
    if (rel < bestrel) {
      bestrel = rel;
      best = &r;
    }
  }
  return best;
}

}  // namespace nschwet
