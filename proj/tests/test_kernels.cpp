#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nschwet/kernels.hpp"

using namespace nschwet;

namespace {

std::mt19937_64 rng(12345);

std::vector<double> randvec(size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

struct BackendGuard {
  ~BackendGuard() { kern::reset_backend(); }
};

// dense reference solve for banded systems
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace

TEST_CASE("elementwise kernels match std::fma semantics") {
  const auto x = randvec(1039);
  auto y = randvec(1039);
  auto y2 = y;
  kern::axpy(y.data(), 0.37, x.data(), 1039);
  for (size_t i = 0; i < y2.size(); ++i) y2[i] = std::fma(0.37, x[i], y2[i]);
  CHECK(y == y2);
}

TEST_CASE("scalar and avx2 backends agree") {
  if (!kern::cpu_has_avx2()) return;
  BackendGuard guard;
  const size_t n = 1537;  // not a multiple of the vector width
  const auto x = randvec(n), y0 = randvec(n);

  SUBCASE("axpy/axpby/zaxpy bitwise") {
    for (auto op : {0, 1, 2}) {
      auto ys = y0;
      std::vector<double> zs(n), za(n);
      kern::force_backend(kern::Backend::scalar);
      if (op == 0) kern::axpy(ys.data(), 1.7, x.data(), n);
      if (op == 1) kern::axpby(ys.data(), 1.7, x.data(), -0.3, n);
      if (op == 2) kern::zaxpy(zs.data(), y0.data(), 1.7, x.data(), n);
      auto ya = y0;
      kern::force_backend(kern::Backend::avx2);
      if (op == 0) kern::axpy(ya.data(), 1.7, x.data(), n);
      if (op == 1) kern::axpby(ya.data(), 1.7, x.data(), -0.3, n);
      if (op == 2) kern::zaxpy(za.data(), y0.data(), 1.7, x.data(), n);
      if (op == 2)
        CHECK(zs == za);
      else
        CHECK(ys == ya);
    }
  }

  SUBCASE("reductions agree to roundoff") {
    kern::force_backend(kern::Backend::scalar);
    const double ds = kern::dot(x.data(), y0.data(), n);
    const double ms = kern::max_abs(x.data(), n);
    kern::force_backend(kern::Backend::avx2);
    const double da = kern::dot(x.data(), y0.data(), n);
    const double ma = kern::max_abs(x.data(), n);
    CHECK(da == doctest::Approx(ds).epsilon(1e-13));
    CHECK(ma == ms);
  }

  SUBCASE("matmul bitwise") {
    const int m = 37, k = 23, nn = 29;
    const auto a = randvec(size_t(m) * k);
    const auto b = randvec(size_t(k) * nn);
    std::vector<double> cs(size_t(m) * nn), ca(size_t(m) * nn);
    kern::force_backend(kern::Backend::scalar);
    kern::matmul(a.data(), k, b.data(), nn, cs.data(), nn, m, k, nn);
    kern::force_backend(kern::Backend::avx2);
    kern::matmul(a.data(), k, b.data(), nn, ca.data(), nn, m, k, nn);
    CHECK(cs == ca);
  }

  SUBCASE("batched substitutions bitwise") {
    const int sz = 41, lanes = 7;
    auto l2 = randvec(size_t(sz) * lanes, 0.0, 0.2);
    auto l1 = randvec(size_t(sz) * lanes, 0.0, 0.3);
    auto id = randvec(size_t(sz) * lanes, 0.5, 1.5);
    auto u1 = randvec(size_t(sz) * lanes, 0.0, 0.3);
    auto u2 = randvec(size_t(sz) * lanes, 0.0, 0.2);
    const auto b0 = randvec(size_t(sz) * lanes);
    auto bs = b0, ba = b0;
    kern::force_backend(kern::Backend::scalar);
    kern::pentasolve_batched(l2.data(), l1.data(), id.data(), u1.data(), u2.data(), bs.data(),
                             sz, lanes);
    kern::force_backend(kern::Backend::avx2);
    kern::pentasolve_batched(l2.data(), l1.data(), id.data(), u1.data(), u2.data(), ba.data(),
                             sz, lanes);
    CHECK(bs == ba);
    auto ts = b0, ta = b0;
    kern::force_backend(kern::Backend::scalar);
    kern::trisolve_batched(l1.data(), id.data(), u1.data(), ts.data(), sz, lanes);
    kern::force_backend(kern::Backend::avx2);
    kern::trisolve_batched(l1.data(), id.data(), u1.data(), ta.data(), sz, lanes);
    CHECK(ts == ta);
  }
}

TEST_CASE("matmul multiplies correctly") {
  const int m = 5, k = 4, n = 3;
  const auto a = randvec(size_t(m) * k);
  const auto b = randvec(size_t(k) * n);
  std::vector<double> c(size_t(m) * n);
  kern::matmul(a.data(), k, b.data(), n, c.data(), n, m, k, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int kk = 0; kk < k; ++kk) s += a[i * k + kk] * b[kk * n + j];
      CHECK(c[i * n + j] == doctest::Approx(s).epsilon(1e-14));
    }
}

#include "nschwet/linsolve.hpp"

TEST_CASE("penta factorization solves against dense reference") {
  const int n = 24, lanes = 3;
  std::vector<double> a2(size_t(n) * lanes), a1(size_t(n) * lanes), b(size_t(n) * lanes),
      c1(size_t(n) * lanes), c2(size_t(n) * lanes);
  for (int l = 0; l < lanes; ++l)
    for (int i = 0; i < n; ++i) {
      const size_t k = size_t(i) * lanes + l;
      a2[k] = (i >= 2) ? 0.2 + 0.1 * l : 0.0;
      a1[k] = (i >= 1) ? -1.1 : 0.0;
      b[k] = 4.0 + 0.3 * l + 0.01 * i;
      c1[k] = (i < n - 1) ? -0.9 : 0.0;
      c2[k] = (i < n - 2) ? 0.15 : 0.0;
    }
  PentaBatch pb;
  pb.factor(a2, a1, b, c1, c2, n, lanes);
  auto rhs = randvec(size_t(n) * lanes);
  auto sol = rhs;
  pb.solve(sol.data());
  for (int l = 0; l < lanes; ++l) {
    std::vector<std::vector<double>> dm(n, std::vector<double>(n, 0.0));
    std::vector<double> db(n);
    for (int i = 0; i < n; ++i) {
      const size_t k = size_t(i) * lanes + l;
      if (i >= 2) dm[i][i - 2] = a2[k];
      if (i >= 1) dm[i][i - 1] = a1[k];
      dm[i][i] = b[k];
      if (i < n - 1) dm[i][i + 1] = c1[k];
      if (i < n - 2) dm[i][i + 2] = c2[k];
      db[i] = rhs[k];
    }
    const auto ref = dense_solve(dm, db);
    for (int i = 0; i < n; ++i)
      CHECK(sol[size_t(i) * lanes + l] == doctest::Approx(ref[i]).epsilon(1e-11));
  }
}

TEST_CASE("tri factorization solves against dense reference") {
  const int n = 17, lanes = 2;
  std::vector<double> a(size_t(n) * lanes), b(size_t(n) * lanes), c(size_t(n) * lanes);
  for (int l = 0; l < lanes; ++l)
    for (int i = 0; i < n; ++i) {
      const size_t k = size_t(i) * lanes + l;
      a[k] = (i >= 1) ? -1.0 : 0.0;
      b[k] = 2.5 + 0.2 * l;
      c[k] = (i < n - 1) ? -1.0 : 0.0;
    }
  TriBatch tb;
  tb.factor(a, b, c, n, lanes);
  auto rhs = randvec(size_t(n) * lanes);
  auto sol = rhs;
  tb.solve(sol.data());
  for (int l = 0; l < lanes; ++l) {
    std::vector<std::vector<double>> dm(n, std::vector<double>(n, 0.0));
    std::vector<double> db(n);
    for (int i = 0; i < n; ++i) {
      const size_t k = size_t(i) * lanes + l;
      if (i >= 1) dm[i][i - 1] = a[k];
      dm[i][i] = b[k];
      if (i < n - 1) dm[i][i + 1] = c[k];
      db[i] = rhs[k];
    }
    const auto ref = dense_solve(dm, db);
    for (int i = 0; i < n; ++i)
      CHECK(sol[size_t(i) * lanes + l] == doctest::Approx(ref[i]).epsilon(1e-11));
  }
}
