#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nschwet/linsolve.hpp"

using namespace nschwet;

TEST_CASE("cosine basis diagonalizes the mirror y-laplacian") {
  const int ny = 18;
  const double dy = 0.01;
  const auto b = CosineBasisY::make(ny, dy);

  // orthonormality
  for (int k = 0; k < ny; ++k)
    for (int l = 0; l < ny; ++l) {
      double s = 0.0;
      for (int j = 0; j < ny; ++j) s += b.q[j * ny + k] * b.q[j * ny + l];
      CHECK(s == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
    }

  // eigen identity with mirror ghosts
  for (int k = 0; k < ny; ++k) {
    for (int j = 0; j < ny; ++j) {
      const double vm = (j > 0) ? b.q[(j - 1) * ny + k] : b.q[0 * ny + k];
      const double vp = (j < ny - 1) ? b.q[(j + 1) * ny + k] : b.q[(ny - 1) * ny + k];
      const double lap = (vm - 2.0 * b.q[j * ny + k] + vp) / (dy * dy);
      CHECK(lap == doctest::Approx(-b.lambda[k] * b.q[j * ny + k]).epsilon(1e-9).scale(
                       1.0 / (dy * dy)));
    }
  }

  // forward then inverse is the identity
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1, 1);
  const int rows = 7;
  std::vector<double> in(size_t(rows) * ny), mid(in.size()), out(in.size());
  for (auto& x : in) x = d(rng);
  b.forward(in.data(), mid.data(), rows);
  b.inverse(mid.data(), out.data(), rows);
  for (size_t i = 0; i < in.size(); ++i) CHECK(out[i] == doctest::Approx(in[i]).epsilon(1e-12));
}

TEST_CASE("x-laplacian bands match the field operator on x-only data") {
  const auto g = StaggeredGrid::uniform(20, 4, 2.0, 0.4);
  const auto xl = XLaplacian::make(g);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<double> v(g.nx), y(g.nx);
  for (auto& x : v) x = d(rng);
  xl.apply(v.data(), y.data());

  Field f(Loc::center, g), out(Loc::center, g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = -1; j <= g.ny; ++j) f.at(i, j) = v[i];
  // mirror x ghosts
  for (int j = -1; j <= g.ny; ++j) {
    f.at(-1, j) = f.at(0, j);
    f.at(g.nx, j) = f.at(g.nx - 1, j);
  }
  laplacian_cc(g, f, out);
  for (int i = 0; i < g.nx; ++i) CHECK(out.at(i, 1) == doctest::Approx(y[i]).epsilon(1e-11));

  // squared bands equal two applications
  std::vector<double> y2(g.nx), z(g.nx);
  xl.apply(y.data(), y2.data());
  for (int i = 0; i < g.nx; ++i) {
    double s = xl.sd[i] * v[i];
    if (i >= 2) s += xl.s2m[i] * v[i - 2];
    if (i >= 1) s += xl.s1m[i] * v[i - 1];
    if (i < g.nx - 1) s += xl.s1p[i] * v[i + 1];
    if (i < g.nx - 2) s += xl.s2p[i] * v[i + 2];
    z[i] = s;
  }
  for (int i = 0; i < g.nx; ++i)
    CHECK(z[i] == doctest::Approx(y2[i]).epsilon(1e-10).scale(std::fabs(y2[i]) + 1.0));
}

TEST_CASE("bicgstab and pcg solve small systems") {
  const int n = 40;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-1, 1);
  // SPD tridiagonal-ish system
  auto apply = [&](const double* x, double* y) {
    for (int i = 0; i < n; ++i) {
      double s = 4.0 * x[i];
      if (i > 0) s -= x[i - 1];
      if (i < n - 1) s -= x[i + 1];
      y[i] = s;
    }
  };
  std::vector<double> b(n), x(n, 0.0), ref(n);
  for (auto& v : ref) v = d(rng);
  apply(ref.data(), b.data());

  auto jacobi = [&](const double* r, double* z) {
    for (int i = 0; i < n; ++i) z[i] = r[i] / 4.0;
  };

  SUBCASE("pcg") {
    const auto res = pcg(apply, b.data(), x.data(), n, 1e-12, 200, jacobi);
    CHECK(res.converged);
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-9));
  }
  SUBCASE("bicgstab") {
    const auto res = bicgstab(apply, b.data(), x.data(), n, 1e-12, 200, jacobi);
    CHECK(res.converged);
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-9));
  }
  SUBCASE("nonsymmetric bicgstab") {
    auto apply_ns = [&](const double* xx, double* y) {
      for (int i = 0; i < n; ++i) {
        double s = 4.0 * xx[i];
        if (i > 0) s -= 1.5 * xx[i - 1];
        if (i < n - 1) s -= 0.5 * xx[i + 1];
        y[i] = s;
      }
    };
    std::vector<double> bn(n), xn(n, 0.0);
    apply_ns(ref.data(), bn.data());
    const auto res = bicgstab(apply_ns, bn.data(), xn.data(), n, 1e-12, 400, jacobi);
    CHECK(res.converged);
    for (int i = 0; i < n; ++i) CHECK(xn[i] == doctest::Approx(ref[i]).epsilon(1e-8));
  }
  SUBCASE("absolute tolerance controls the exit") {
    std::vector<double> xa(n, 0.0), r(n);
    const auto res = pcg(apply, b.data(), xa.data(), n, 0.0, 500, jacobi, 1e-10);
    CHECK(res.converged);
    apply(xa.data(), r.data());
    double rn = 0.0;
    for (int i = 0; i < n; ++i) rn += (r[i] - b[i]) * (r[i] - b[i]);
    CHECK(std::sqrt(rn) <= 1.1e-10);
  }
}
