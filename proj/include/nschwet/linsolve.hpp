#pragma once
// Linear-algebra building blocks: the cosine eigenbasis of the uniform
// Neumann y-Laplacian (separable direct solves), banded x-operators on the
// stretched grid, batched tri/penta factorizations, and matrix-free Krylov
// solvers (BiCGStab, PCG).

#include <functional>
#include <vector>

#include "nschwet/grid.hpp"

namespace nschwet {

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Orthonormal eigenbasis of the mirror-ghost 1-D Laplacian on ny uniform
// cells: v_k(j) = c_k cos(k pi (j+1/2)/ny), -Dyy v_k = lambda_k v_k.
struct CosineBasisY {
  int n = 0;
  std::vector<double> q;       // n x n, q[j*n + k] = v_k(j)
  std::vector<double> qt;      // transpose
  std::vector<double> lambda;  // eigenvalues of -Dyy, >= 0
  static CosineBasisY make(int ny, double dy);
  // rows x n arrays; out = in * Q (forward: nodal -> modal), out = in * Q^T back
  void forward(const double* in, double* out, int rows) const;
  void inverse(const double* in, double* out, int rows) const;
};

// Tridiagonal bands of the mirror-ghost x-Laplacian and pentadiagonal bands
// of its square, on the (possibly stretched) grid.
struct XLaplacian {
  int n = 0;
  std::vector<double> lo, di, up;                   // Dxx
  std::vector<double> s2m, s1m, sd, s1p, s2p;       // Dxx^2
  static XLaplacian make(const StaggeredGrid& g);
  void apply(const double* x, double* y) const;     // y = Dxx x (single lane)
};

// Batched prefactored solvers; lane-contiguous layout v[i*lanes + lane].
struct TriBatch {
  int n = 0, lanes = 0;
  std::vector<double> l1, invd, u1;
  // bands given per lane: a(i,l) x_{i-1} + b(i,l) x_i + c(i,l) x_{i+1}
  void factor(const std::vector<double>& a, const std::vector<double>& b,
              const std::vector<double>& c, int n, int lanes);
  void solve(double* rhs) const;
};

struct PentaBatch {
  int n = 0, lanes = 0;
  std::vector<double> l2, l1, invd, u1, u2;
  void factor(const std::vector<double>& a2, const std::vector<double>& a1,
              const std::vector<double>& b, const std::vector<double>& c1,
              const std::vector<double>& c2, int n, int lanes);
  void solve(double* rhs) const;
};

struct KrylovResult {
  bool converged = false;
  int iters = 0;
  double rel_residual = 0.0;
};

using LinOp = std::function<void(const double*, double*)>;

// Right-preconditioned BiCGStab; precond may be empty. Convergence when
// ||r|| <= max(rel_tol*||b||, abs_tol).
KrylovResult bicgstab(const LinOp& a, const double* b, double* x, std::ptrdiff_t n,
                      double rel_tol, int max_iters, const LinOp& precond = nullptr,
                      double abs_tol = 0.0);

KrylovResult pcg(const LinOp& a, const double* b, double* x, std::ptrdiff_t n,
                 double rel_tol, int max_iters, const LinOp& precond = nullptr,
                 double abs_tol = 0.0);

}  // namespace nschwet
