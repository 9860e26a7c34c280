#pragma once
// Staggered (MAC) rectilinear grid on (0,Lx) x (0,Ly): u on vertical cell
// faces, v on horizontal faces, scalars at centers; one ghost layer per side.
// The x direction may be tanh-density stretched toward the contact-line
// window; y is uniform.

#include <string>
#include <vector>

#include "nschwet/params.hpp"

namespace nschwet {

enum class Loc { center, xface, yface };

struct StaggeredGrid {
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  std::vector<double> xf;   // nx+1 face abscissae, xf[0] = 0, xf[nx] = lx
  std::vector<double> xc;   // nx cell centers
  std::vector<double> dx;   // nx cell widths
  std::vector<double> dxc;  // nx+1 center spacings; mirrored at the ends
  double dy = 0.0;
  std::vector<double> yf;   // ny+1
  std::vector<double> yc;   // ny

  // Stretched build; the refinement window is |x - x0| <= 4 eps + 2 max(s_m, s_nu)
  // widened by the contact-line tilt allowance when theta_eq != pi/2.
  static StaggeredGrid build(const CaseConfig& c);
  static StaggeredGrid uniform(int nx, int ny, double lx, double ly);
  static StaggeredGrid from_faces(std::vector<double> xf, int ny, double ly);

  double min_dx() const;
  double min_dx_in(double xlo, double xhi) const;
  double vol(int i) const { return dx[i] * dy; }
};

struct Field {
  Loc loc = Loc::center;
  int nx = 0, ny = 0;  // owned points
  int stride = 0;      // ny + 2
  std::vector<double> a;

  Field() = default;
  Field(Loc l, const StaggeredGrid& g);

  double& at(int i, int j) { return a[size_t((i + 1) * stride + (j + 1))]; }
  double at(int i, int j) const { return a[size_t((i + 1) * stride + (j + 1))]; }
  double* data() { return a.data(); }
  const double* data() const { return a.data(); }
  size_t size() const { return a.size(); }
  void zero();
};

struct State {
  double t = 0.0;
  Field u, v, p, phi, mu;
  static State make(const StaggeredGrid& g);
};

// Discrete operators; ghost layers of the inputs must be filled.
void divergence(const StaggeredGrid& g, const Field& u, const Field& v, Field& out);
void gradient_cc_to_faces(const StaggeredGrid& g, const Field& s, Field& gx, Field& gy);
void laplacian_cc(const StaggeredGrid& g, const Field& s, Field& out);

double max_abs_interior(const Field& f);

// Snapshot file, format NSCHW1 (docs/snapshot_format.md).
void write_snapshot(const std::string& path, const StaggeredGrid& g, const State& s);
State read_snapshot(const std::string& path, StaggeredGrid& g);

}  // namespace nschwet
