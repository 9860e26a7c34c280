#include "nschwet/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nschwet {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian");

namespace {

void finish_x(StaggeredGrid& g) {
  const int nx = g.nx;
  g.xc.resize(nx);
  g.dx.resize(nx);
  for (int i = 0; i < nx; ++i) {
    g.xc[i] = 0.5 * (g.xf[i] + g.xf[i + 1]);
    g.dx[i] = g.xf[i + 1] - g.xf[i];
    if (!(g.dx[i] > 0.0)) throw ConfigError("grid: x coordinates not strictly increasing");
  }
  g.dxc.resize(nx + 1);
  g.dxc[0] = g.dx[0];          // mirrored ghost center
  g.dxc[nx] = g.dx[nx - 1];
  for (int i = 1; i < nx; ++i) g.dxc[i] = g.xc[i] - g.xc[i - 1];
}

void finish_y(StaggeredGrid& g) {
  g.dy = g.ly / g.ny;
  g.yf.resize(g.ny + 1);
  g.yc.resize(g.ny);
  for (int j = 0; j <= g.ny; ++j) g.yf[j] = j * g.dy;
  for (int j = 0; j < g.ny; ++j) g.yc[j] = (j + 0.5) * g.dy;
}

}  // namespace

static void validate_window(const StaggeredGrid& g, const CaseConfig& c);

StaggeredGrid StaggeredGrid::uniform(int nx, int ny, double lx, double ly) {
  StaggeredGrid g;
  g.nx = nx;
  g.ny = ny;
  g.lx = lx;
  g.ly = ly;
  g.xf.resize(nx + 1);
  for (int i = 0; i <= nx; ++i) g.xf[i] = lx * i / nx;
  g.xf[nx] = lx;
  finish_x(g);
  finish_y(g);
  return g;
}

StaggeredGrid StaggeredGrid::from_faces(std::vector<double> xf, int ny, double ly) {
  StaggeredGrid g;
  g.nx = static_cast<int>(xf.size()) - 1;
  g.ny = ny;
  g.lx = xf.back();
  g.ly = ly;
  g.xf = std::move(xf);
  finish_x(g);
  finish_y(g);
  return g;
}

StaggeredGrid StaggeredGrid::build(const CaseConfig& c) {
  const Numerics& n = c.numerics;
  if (n.x_stretch <= 1.0 + 1e-12) {
    StaggeredGrid g = uniform(n.nx, n.ny, c.channel.lx, c.channel.ly);
    validate_window(g, c);
    return g;
  }
  // Cell-density stretching: density r inside the window, 1 outside, blended
  // with tanh ramps; faces are the inverse CDF sampled at uniform fractions.
  const double eps = c.interface.epsilon;
  const double sm = c.s_m(std::max(c.fluids.eta_l, c.fluids.eta_a));
  const double sn = c.s_nu(std::max(c.fluids.eta_l, c.fluids.eta_a));
  const double tilt = c.channel.ell() * std::fabs(std::cos(c.wetting.theta_eq) /
                                                  std::sin(c.wetting.theta_eq));
  const double w = 4.0 * eps + 2.0 * std::max(sm, sn) + 1.25 * tilt;
  const double x0 = c.channel.interface_x0;
  const double lx = c.channel.lx;
  const double r = n.x_stretch;
  const double ramp = std::max(0.25 * w, 2.0 * eps);

  const int fine = 20 * n.nx;
  std::vector<double> cdf(fine + 1, 0.0);
  auto density = [&](double x) {
    const double b = 0.5 * (std::tanh((x - (x0 - w)) / ramp) - std::tanh((x - (x0 + w)) / ramp));
    return 1.0 + (r - 1.0) * b;
  };
  for (int k = 0; k < fine; ++k) {
    const double xm = lx * (k + 0.5) / fine;
    cdf[k + 1] = cdf[k] + density(xm);
  }
  StaggeredGrid g;
  g.nx = n.nx;
  g.ny = n.ny;
  g.lx = lx;
  g.ly = c.channel.ly;
  g.xf.assign(n.nx + 1, 0.0);
  g.xf[n.nx] = lx;
  const double total = cdf[fine];
  int k = 0;
  for (int i = 1; i < n.nx; ++i) {
    const double target = total * i / n.nx;
    while (cdf[k + 1] < target) ++k;
    const double frac = (target - cdf[k]) / (cdf[k + 1] - cdf[k]);
    g.xf[i] = lx * (k + frac) / fine;
  }
  finish_x(g);
  finish_y(g);
  validate_window(g, c);
  return g;
}

static void validate_window(const StaggeredGrid& g, const CaseConfig& c) {
  const double eps = c.interface.epsilon;
  const double sm = c.s_m(std::max(c.fluids.eta_l, c.fluids.eta_a));
  const double sn = c.s_nu(std::max(c.fluids.eta_l, c.fluids.eta_a));
  const double w = 4.0 * eps + 2.0 * std::max(sm, sn);
  const double x0 = c.channel.interface_x0;
  const double got = g.min_dx_in(std::max(0.0, x0 - w), std::min(g.lx, x0 + w));
  if (got > 0.5 * eps)
    throw ConfigError("grid does not resolve the interface: min dx in the window is " +
                      std::to_string(got) + " > eps/2 = " + std::to_string(0.5 * eps));
}

double StaggeredGrid::min_dx() const {
  return *std::min_element(dx.begin(), dx.end());
}

double StaggeredGrid::min_dx_in(double xlo, double xhi) const {
  double m = dx[0];
  bool any = false;
  for (int i = 0; i < nx; ++i) {
    if (xc[i] >= xlo && xc[i] <= xhi) {
      m = any ? std::min(m, dx[i]) : dx[i];
      any = true;
    }
  }
  return any ? m : min_dx();
}

Field::Field(Loc l, const StaggeredGrid& g) : loc(l) {
  switch (l) {
    case Loc::center: nx = g.nx; ny = g.ny; break;
    case Loc::xface: nx = g.nx + 1; ny = g.ny; break;
    case Loc::yface: nx = g.nx; ny = g.ny + 1; break;
  }
  stride = ny + 2;
  a.assign(size_t(nx + 2) * stride, 0.0);
}

void Field::zero() { std::fill(a.begin(), a.end(), 0.0); }

State State::make(const StaggeredGrid& g) {
  State s;
  s.u = Field(Loc::xface, g);
  s.v = Field(Loc::yface, g);
  s.p = Field(Loc::center, g);
  s.phi = Field(Loc::center, g);
  s.mu = Field(Loc::center, g);
  return s;
}

void divergence(const StaggeredGrid& g, const Field& u, const Field& v, Field& out) {
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      out.at(i, j) = (u.at(i + 1, j) - u.at(i, j)) / g.dx[i] +
                     (v.at(i, j + 1) - v.at(i, j)) / g.dy;
}

void gradient_cc_to_faces(const StaggeredGrid& g, const Field& s, Field& gx, Field& gy) {
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      gx.at(i, j) = (s.at(i, j) - s.at(i - 1, j)) / g.dxc[i];
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j <= g.ny; ++j)
      gy.at(i, j) = (s.at(i, j) - s.at(i, j - 1)) / g.dy;
}

void laplacian_cc(const StaggeredGrid& g, const Field& s, Field& out) {
  for (int i = 0; i < g.nx; ++i) {
    const double wdx = g.dx[i];
    for (int j = 0; j < g.ny; ++j) {
      const double fx = (s.at(i + 1, j) - s.at(i, j)) / g.dxc[i + 1] -
                        (s.at(i, j) - s.at(i - 1, j)) / g.dxc[i];
      const double fy = s.at(i, j + 1) - 2.0 * s.at(i, j) + s.at(i, j - 1);
      out.at(i, j) = fx / wdx + fy / (g.dy * g.dy);
    }
  }
}

double max_abs_interior(const Field& f) {
  double m = 0.0;
  for (int i = 0; i < f.nx; ++i)
    for (int j = 0; j < f.ny; ++j) m = std::max(m, std::fabs(f.at(i, j)));
  return m;
}

// ------------------------------------------------------------- snapshots ---

namespace {

void write_block(std::ofstream& out, const Field& f) {
  std::vector<double> buf(size_t(f.nx) * f.ny);
  for (int i = 0; i < f.nx; ++i)
    for (int j = 0; j < f.ny; ++j) buf[size_t(i) * f.ny + j] = f.at(i, j);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
}

void read_block(std::ifstream& in, Field& f) {
  std::vector<double> buf(size_t(f.nx) * f.ny);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(double)));
  for (int i = 0; i < f.nx; ++i)
    for (int j = 0; j < f.ny; ++j) f.at(i, j) = buf[size_t(i) * f.ny + j];
}

}  // namespace

void write_snapshot(const std::string& path, const StaggeredGrid& g, const State& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
  char header[256];
  std::snprintf(header, sizeof(header), "NSCHW1 %d %d %.17g %.17g %.17g\n", g.nx, g.ny, g.lx,
                g.ly, s.t);
  out << header;
  out.write(reinterpret_cast<const char*>(g.xf.data()),
            static_cast<std::streamsize>(g.xf.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(g.yf.data()),
            static_cast<std::streamsize>(g.yf.size() * sizeof(double)));
  write_block(out, s.u);
  write_block(out, s.v);
  write_block(out, s.p);
  write_block(out, s.phi);
  write_block(out, s.mu);
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

State read_snapshot(const std::string& path, StaggeredGrid& g) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  std::string header;
  std::getline(in, header);
  char tag[16];
  int nx = 0, ny = 0;
  double lx = 0, ly = 0, t = 0;
  if (std::sscanf(header.c_str(), "%15s %d %d %lg %lg %lg", tag, &nx, &ny, &lx, &ly, &t) != 6 ||
      std::string(tag) != "NSCHW1")
    throw std::runtime_error("bad snapshot header in " + path);
  std::vector<double> xf(nx + 1);
  std::vector<double> yf(ny + 1);
  in.read(reinterpret_cast<char*>(xf.data()), static_cast<std::streamsize>(xf.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(yf.data()), static_cast<std::streamsize>(yf.size() * sizeof(double)));
  g = StaggeredGrid::from_faces(std::move(xf), ny, ly);
  State s = State::make(g);
  s.t = t;
  read_block(in, s.u);
  read_block(in, s.v);
  read_block(in, s.p);
  read_block(in, s.phi);
  read_block(in, s.mu);
  if (!in) throw std::runtime_error("snapshot truncated: " + path);
  return s;
}

}  // namespace nschwet
