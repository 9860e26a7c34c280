#pragma once
// Vector kernels used by the solver inner loops. Every kernel has a scalar
// reference implementation and an AVX2/FMA variant; the backend is selected
// once at startup from CPUID and can be overridden with NSCHWET_KERNELS=scalar
// (or =avx2). Elementwise kernels, the dense row transforms, and the banded
// substitutions execute the same fma sequence per element in both backends and
// must agree bitwise; reductions may reassociate and agree to roundoff.

#include <cstddef>

namespace nschwet::kern {

enum class Backend { scalar, avx2 };

Backend active();
const char* backend_name(Backend b);
bool cpu_has_avx2();

// Test hooks. Normal code never calls these.
void force_backend(Backend b);
void reset_backend();

void fill(double* y, double a, std::ptrdiff_t n);
void copy(double* y, const double* x, std::ptrdiff_t n);
void scale(double* y, double a, std::ptrdiff_t n);

// y += a*x
void axpy(double* y, double a, const double* x, std::ptrdiff_t n);
// y = a*x + b*y
void axpby(double* y, double a, const double* x, double b, std::ptrdiff_t n);
// z = y + a*x
void zaxpy(double* z, const double* y, double a, const double* x, std::ptrdiff_t n);

double dot(const double* x, const double* y, std::ptrdiff_t n);
double nrm2sq(const double* x, std::ptrdiff_t n);
double max_abs(const double* x, std::ptrdiff_t n);

// C (m x n) = A (m x k) * B (k x n), row-major with leading dimensions.
void matmul(const double* a, std::ptrdiff_t lda, const double* b, std::ptrdiff_t ldb,
            double* c, std::ptrdiff_t ldc, int m, int k, int n);

// Batched banded back-substitution on pre-factored LU bands. All arrays use
// the lane-contiguous layout v[i*lanes + lane]; each lane is an independent
// system of size n. l* are the unit-lower multipliers, invd the reciprocal
// pivots, u* the upper bands. b holds the right-hand sides and is overwritten
// with the solutions.
void trisolve_batched(const double* l1, const double* invd, const double* u1,
                      double* b, int n, int lanes);
void pentasolve_batched(const double* l2, const double* l1, const double* invd,
                        const double* u1, const double* u2,
                        double* b, int n, int lanes);

} // namespace nschwet::kern
