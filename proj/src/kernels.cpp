#include "nschwet/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#if defined(__x86_64__) || defined(_M_X64)
#define NSCHWET_X86 1
#include <immintrin.h>
#else
#define NSCHWET_X86 0
#endif

namespace nschwet::kern {

// ---------------------------------------------------------------- scalar ---

namespace scalar {

void fill(double* y, double a, std::ptrdiff_t n) {
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = a;
}

void copy(double* y, const double* x, std::ptrdiff_t n) {
  std::memcpy(y, x, static_cast<size_t>(n) * sizeof(double));
}

void scale(double* y, double a, std::ptrdiff_t n) {
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] *= a;
}

void axpy(double* y, double a, const double* x, std::ptrdiff_t n) {
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void axpby(double* y, double a, const double* x, double b, std::ptrdiff_t n) {
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], b * y[i]);
}

void zaxpy(double* z, const double* y, double a, const double* x, std::ptrdiff_t n) {
  for (std::ptrdiff_t i = 0; i < n; ++i) z[i] = std::fma(a, x[i], y[i]);
}

double dot(const double* x, const double* y, std::ptrdiff_t n) {
  double s = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) s = std::fma(x[i], y[i], s);
  return s;
}

double nrm2sq(const double* x, std::ptrdiff_t n) { return dot(x, x, n); }

double max_abs(const double* x, std::ptrdiff_t n) {
  double m = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

void matmul(const double* a, std::ptrdiff_t lda, const double* b, std::ptrdiff_t ldb,
            double* c, std::ptrdiff_t ldc, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    double* ci = c + i * ldc;
    for (int j = 0; j < n; ++j) ci[j] = 0.0;
    const double* ai = a + i * lda;
    for (int kk = 0; kk < k; ++kk) {
      const double aik = ai[kk];
      const double* bk = b + kk * ldb;
      for (int j = 0; j < n; ++j) ci[j] = std::fma(aik, bk[j], ci[j]);
    }
  }
}

void trisolve_batched(const double* l1, const double* invd, const double* u1,
                      double* b, int n, int lanes) {
  for (int i = 1; i < n; ++i) {
    double* bi = b + static_cast<std::ptrdiff_t>(i) * lanes;
    const double* bm = bi - lanes;
    const double* li = l1 + static_cast<std::ptrdiff_t>(i) * lanes;
    for (int l = 0; l < lanes; ++l) bi[l] = std::fma(-li[l], bm[l], bi[l]);
  }
  {
    double* bi = b + static_cast<std::ptrdiff_t>(n - 1) * lanes;
    const double* di = invd + static_cast<std::ptrdiff_t>(n - 1) * lanes;
    for (int l = 0; l < lanes; ++l) bi[l] *= di[l];
  }
  for (int i = n - 2; i >= 0; --i) {
    double* bi = b + static_cast<std::ptrdiff_t>(i) * lanes;
    const double* bp = bi + lanes;
    const double* ui = u1 + static_cast<std::ptrdiff_t>(i) * lanes;
    const double* di = invd + static_cast<std::ptrdiff_t>(i) * lanes;
    for (int l = 0; l < lanes; ++l) bi[l] = std::fma(-ui[l], bp[l], bi[l]) * di[l];
  }
}

void pentasolve_batched(const double* l2, const double* l1, const double* invd,
                        const double* u1, const double* u2,
                        double* b, int n, int lanes) {
  for (int i = 1; i < n; ++i) {
    double* bi = b + static_cast<std::ptrdiff_t>(i) * lanes;
    const double* b1 = bi - lanes;
    const double* li1 = l1 + static_cast<std::ptrdiff_t>(i) * lanes;
    if (i >= 2) {
      const double* b2 = bi - 2 * static_cast<std::ptrdiff_t>(lanes);
      const double* li2 = l2 + static_cast<std::ptrdiff_t>(i) * lanes;
      for (int l = 0; l < lanes; ++l)
        bi[l] = std::fma(-li2[l], b2[l], std::fma(-li1[l], b1[l], bi[l]));
    } else {
      for (int l = 0; l < lanes; ++l) bi[l] = std::fma(-li1[l], b1[l], bi[l]);
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double* bi = b + static_cast<std::ptrdiff_t>(i) * lanes;
    const double* di = invd + static_cast<std::ptrdiff_t>(i) * lanes;
    if (i <= n - 3) {
      const double* b1 = bi + lanes;
      const double* b2 = bi + 2 * static_cast<std::ptrdiff_t>(lanes);
      const double* ui1 = u1 + static_cast<std::ptrdiff_t>(i) * lanes;
      const double* ui2 = u2 + static_cast<std::ptrdiff_t>(i) * lanes;
      for (int l = 0; l < lanes; ++l)
        bi[l] = std::fma(-ui2[l], b2[l], std::fma(-ui1[l], b1[l], bi[l])) * di[l];
    } else if (i == n - 2) {
      const double* b1 = bi + lanes;
      const double* ui1 = u1 + static_cast<std::ptrdiff_t>(i) * lanes;
      for (int l = 0; l < lanes; ++l) bi[l] = std::fma(-ui1[l], b1[l], bi[l]) * di[l];
    } else {
      for (int l = 0; l < lanes; ++l) bi[l] *= di[l];
    }
  }
}

} // namespace scalar

// ------------------------------------------------------------------ avx2 ---

#if NSCHWET_X86

namespace avx2 {

#define NSCHWET_AVX2 __attribute__((target("avx2,fma")))

NSCHWET_AVX2 void fill(double* y, double a, std::ptrdiff_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::ptrdiff_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, va);
  for (; i < n; ++i) y[i] = a;
}

void copy(double* y, const double* x, std::ptrdiff_t n) {
  std::memcpy(y, x, static_cast<size_t>(n) * sizeof(double));
}

NSCHWET_AVX2 void scale(double* y, double a, std::ptrdiff_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::ptrdiff_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] *= a;
}

NSCHWET_AVX2 void axpy(double* y, double a, const double* x, std::ptrdiff_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::ptrdiff_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

NSCHWET_AVX2 void axpby(double* y, double a, const double* x, double b, std::ptrdiff_t n) {
  const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
  std::ptrdiff_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), by));
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], b * y[i]);
}

NSCHWET_AVX2 void zaxpy(double* z, const double* y, double a, const double* x, std::ptrdiff_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::ptrdiff_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(z + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) z[i] = std::fma(a, x[i], y[i]);
}

NSCHWET_AVX2 double dot(const double* x, const double* y, std::ptrdiff_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::ptrdiff_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  alignas(32) double t[4];
  _mm256_store_pd(t, acc);
  double s = t[0] + t[1] + t[2] + t[3];
  for (; i < n; ++i) s = std::fma(x[i], y[i], s);
  return s;
}

NSCHWET_AVX2 double nrm2sq(const double* x, std::ptrdiff_t n) { return dot(x, x, n); }

NSCHWET_AVX2 double max_abs(const double* x, std::ptrdiff_t n) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d vm = _mm256_setzero_pd();
  std::ptrdiff_t i = 0;
  for (; i + 4 <= n; i += 4)
    vm = _mm256_max_pd(vm, _mm256_and_pd(mask, _mm256_loadu_pd(x + i)));
  alignas(32) double t[4];
  _mm256_store_pd(t, vm);
  double m = std::max(std::max(t[0], t[1]), std::max(t[2], t[3]));
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

NSCHWET_AVX2 void matmul(const double* a, std::ptrdiff_t lda, const double* b, std::ptrdiff_t ldb,
                         double* c, std::ptrdiff_t ldc, int m, int k, int n) {
  const int n4 = n & ~3;
  for (int i = 0; i < m; ++i) {
    double* ci = c + i * ldc;
    const double* ai = a + i * lda;
    int j = 0;
    for (; j < n4; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int kk = 0; kk < k; ++kk)
        acc = _mm256_fmadd_pd(_mm256_set1_pd(ai[kk]), _mm256_loadu_pd(b + kk * ldb + j), acc);
      _mm256_storeu_pd(ci + j, acc);
    }
    for (; j < n; ++j) {
      double s = 0.0;
      for (int kk = 0; kk < k; ++kk) s = std::fma(ai[kk], b[kk * ldb + j], s);
      ci[j] = s;
    }
  }
}

NSCHWET_AVX2 void trisolve_batched(const double* l1, const double* invd, const double* u1,
                                   double* b, int n, int lanes) {
  const int l4 = lanes & ~3;
  for (int i = 1; i < n; ++i) {
    double* bi = b + static_cast<std::ptrdiff_t>(i) * lanes;
    const double* bm = bi - lanes;
    const double* li = l1 + static_cast<std::ptrdiff_t>(i) * lanes;
    int l = 0;
    for (; l < l4; l += 4) {
      __m256d v = _mm256_fnmadd_pd(_mm256_loadu_pd(li + l), _mm256_loadu_pd(bm + l),
                                   _mm256_loadu_pd(bi + l));
      _mm256_storeu_pd(bi + l, v);
    }
    for (; l < lanes; ++l) bi[l] = std::fma(-li[l], bm[l], bi[l]);
  }
  {
    double* bi = b + static_cast<std::ptrdiff_t>(n - 1) * lanes;
    const double* di = invd + static_cast<std::ptrdiff_t>(n - 1) * lanes;
    int l = 0;
    for (; l < l4; l += 4)
      _mm256_storeu_pd(bi + l, _mm256_mul_pd(_mm256_loadu_pd(bi + l), _mm256_loadu_pd(di + l)));
    for (; l < lanes; ++l) bi[l] *= di[l];
  }
  for (int i = n - 2; i >= 0; --i) {
    double* bi = b + static_cast<std::ptrdiff_t>(i) * lanes;
    const double* bp = bi + lanes;
    const double* ui = u1 + static_cast<std::ptrdiff_t>(i) * lanes;
    const double* di = invd + static_cast<std::ptrdiff_t>(i) * lanes;
    int l = 0;
    for (; l < l4; l += 4) {
      __m256d v = _mm256_fnmadd_pd(_mm256_loadu_pd(ui + l), _mm256_loadu_pd(bp + l),
                                   _mm256_loadu_pd(bi + l));
      _mm256_storeu_pd(bi + l, _mm256_mul_pd(v, _mm256_loadu_pd(di + l)));
    }
    for (; l < lanes; ++l) bi[l] = std::fma(-ui[l], bp[l], bi[l]) * di[l];
  }
}

NSCHWET_AVX2 void pentasolve_batched(const double* l2, const double* l1, const double* invd,
                                     const double* u1, const double* u2,
                                     double* b, int n, int lanes) {
  const int l4 = lanes & ~3;
  for (int i = 1; i < n; ++i) {
    double* bi = b + static_cast<std::ptrdiff_t>(i) * lanes;
    const double* b1 = bi - lanes;
    const double* li1 = l1 + static_cast<std::ptrdiff_t>(i) * lanes;
    if (i >= 2) {
      const double* b2 = bi - 2 * static_cast<std::ptrdiff_t>(lanes);
      const double* li2 = l2 + static_cast<std::ptrdiff_t>(i) * lanes;
      int l = 0;
      for (; l < l4; l += 4) {
        __m256d v = _mm256_fnmadd_pd(_mm256_loadu_pd(li1 + l), _mm256_loadu_pd(b1 + l),
                                     _mm256_loadu_pd(bi + l));
        v = _mm256_fnmadd_pd(_mm256_loadu_pd(li2 + l), _mm256_loadu_pd(b2 + l), v);
        _mm256_storeu_pd(bi + l, v);
      }
      for (; l < lanes; ++l)
        bi[l] = std::fma(-li2[l], b2[l], std::fma(-li1[l], b1[l], bi[l]));
    } else {
      int l = 0;
      for (; l < l4; l += 4) {
        __m256d v = _mm256_fnmadd_pd(_mm256_loadu_pd(li1 + l), _mm256_loadu_pd(b1 + l),
                                     _mm256_loadu_pd(bi + l));
        _mm256_storeu_pd(bi + l, v);
      }
      for (; l < lanes; ++l) bi[l] = std::fma(-li1[l], b1[l], bi[l]);
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double* bi = b + static_cast<std::ptrdiff_t>(i) * lanes;
    const double* di = invd + static_cast<std::ptrdiff_t>(i) * lanes;
    if (i <= n - 3) {
      const double* b1 = bi + lanes;
      const double* b2 = bi + 2 * static_cast<std::ptrdiff_t>(lanes);
      const double* ui1 = u1 + static_cast<std::ptrdiff_t>(i) * lanes;
      const double* ui2 = u2 + static_cast<std::ptrdiff_t>(i) * lanes;
      int l = 0;
      for (; l < l4; l += 4) {
        __m256d v = _mm256_fnmadd_pd(_mm256_loadu_pd(ui1 + l), _mm256_loadu_pd(b1 + l),
                                     _mm256_loadu_pd(bi + l));
        v = _mm256_fnmadd_pd(_mm256_loadu_pd(ui2 + l), _mm256_loadu_pd(b2 + l), v);
        _mm256_storeu_pd(bi + l, _mm256_mul_pd(v, _mm256_loadu_pd(di + l)));
      }
      for (; l < lanes; ++l)
        bi[l] = std::fma(-ui2[l], b2[l], std::fma(-ui1[l], b1[l], bi[l])) * di[l];
    } else if (i == n - 2) {
      const double* b1 = bi + lanes;
      const double* ui1 = u1 + static_cast<std::ptrdiff_t>(i) * lanes;
      int l = 0;
      for (; l < l4; l += 4) {
        __m256d v = _mm256_fnmadd_pd(_mm256_loadu_pd(ui1 + l), _mm256_loadu_pd(b1 + l),
                                     _mm256_loadu_pd(bi + l));
        _mm256_storeu_pd(bi + l, _mm256_mul_pd(v, _mm256_loadu_pd(di + l)));
      }
      for (; l < lanes; ++l) bi[l] = std::fma(-ui1[l], b1[l], bi[l]) * di[l];
    } else {
      int l = 0;
      for (; l < l4; l += 4)
        _mm256_storeu_pd(bi + l, _mm256_mul_pd(_mm256_loadu_pd(bi + l), _mm256_loadu_pd(di + l)));
      for (; l < lanes; ++l) bi[l] *= di[l];
    }
  }
}

#undef NSCHWET_AVX2

} // namespace avx2

#endif // NSCHWET_X86

// -------------------------------------------------------------- dispatch ---

namespace {

Backend detect() {
#if NSCHWET_X86
  if (const char* e = std::getenv("NSCHWET_KERNELS")) {
    const std::string s(e);
    if (s == "scalar") return Backend::scalar;
    if (s == "avx2") return Backend::avx2;
  }
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::avx2;
#endif
  return Backend::scalar;
}

Backend g_backend = detect();

} // namespace

Backend active() { return g_backend; }
void force_backend(Backend b) { g_backend = b; }
void reset_backend() { g_backend = detect(); }

bool cpu_has_avx2() {
#if NSCHWET_X86
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

#if NSCHWET_X86
#define NSCHWET_DISPATCH(fn, ...) \
  do { if (g_backend == Backend::avx2) return avx2::fn(__VA_ARGS__); \
       return scalar::fn(__VA_ARGS__); } while (0)
#else
#define NSCHWET_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void fill(double* y, double a, std::ptrdiff_t n) { NSCHWET_DISPATCH(fill, y, a, n); }
void copy(double* y, const double* x, std::ptrdiff_t n) { NSCHWET_DISPATCH(copy, y, x, n); }
void scale(double* y, double a, std::ptrdiff_t n) { NSCHWET_DISPATCH(scale, y, a, n); }
void axpy(double* y, double a, const double* x, std::ptrdiff_t n) { NSCHWET_DISPATCH(axpy, y, a, x, n); }
void axpby(double* y, double a, const double* x, double b, std::ptrdiff_t n) { NSCHWET_DISPATCH(axpby, y, a, x, b, n); }
void zaxpy(double* z, const double* y, double a, const double* x, std::ptrdiff_t n) { NSCHWET_DISPATCH(zaxpy, z, y, a, x, n); }
double dot(const double* x, const double* y, std::ptrdiff_t n) { NSCHWET_DISPATCH(dot, x, y, n); }
double nrm2sq(const double* x, std::ptrdiff_t n) { NSCHWET_DISPATCH(nrm2sq, x, n); }
double max_abs(const double* x, std::ptrdiff_t n) { NSCHWET_DISPATCH(max_abs, x, n); }
void matmul(const double* a, std::ptrdiff_t lda, const double* b, std::ptrdiff_t ldb,
            double* c, std::ptrdiff_t ldc, int m, int k, int n) {
  NSCHWET_DISPATCH(matmul, a, lda, b, ldb, c, ldc, m, k, n);
}
void trisolve_batched(const double* l1, const double* invd, const double* u1,
                      double* b, int n, int lanes) {
  NSCHWET_DISPATCH(trisolve_batched, l1, invd, u1, b, n, lanes);
}
void pentasolve_batched(const double* l2, const double* l1, const double* invd,
                        const double* u1, const double* u2, double* b, int n, int lanes) {
  NSCHWET_DISPATCH(pentasolve_batched, l2, l1, invd, u1, u2, b, n, lanes);
}

#undef NSCHWET_DISPATCH

} // namespace nschwet::kern
