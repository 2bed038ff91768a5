#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "ptwell/well.hpp"

namespace ptwell {

/// Uniform Dirichlet box [−L, L] with N interior nodes x_i = −L + (i+1)h.
/// N is odd so node delta_index sits at x = 0.
struct FDGrid {
  double L = 0.0;
  int N = 0;
  double h = 0.0;
  int delta_index = 0;

  double x(int i) const { return -L + (i + 1) * h; }
};

/// Grid with half-length ≥ L_min whose spacing divides b, so ±b are nodes.
/// Throws InvalidParameter for even or too small N, or L_min ≤ b.
FDGrid make_grid(const WellParams& p, int N, double L_min);

/// b + 30/α_R(k).
double box_half_length(const WellParams& p, double k);

/// Complex symmetric tridiagonal matrix: diag[0..N), off[0..N−1).
struct Tridiagonal {
  std::vector<cplx> diag;
  std::vector<cplx> off;
};

/// −d²/dx² by central differences plus the on-site potential. Nodes at ±b get
/// the mean of the neighbouring potentials and the δ enters as Λ/h at x = 0.
Tridiagonal discretize(const WellParams& p, const FDGrid& g);

/// All eigenvalues by implicit QL with complex orthogonal rotations.
/// Throws EigensolverFailure on non-convergence or rotation breakdown.
std::vector<cplx> tridiagonal_eigenvalues(const Tridiagonal& t);

/// All eigenvalues from a dense general complex eigendecomposition.
std::vector<cplx> dense_eigenvalues(const Tridiagonal& t);

/// The `count` eigenvalues of smallest |Re E| (after dropping |Im E| >
/// max_abs_imag), sorted by Re E.
std::vector<cplx> oracle_spectrum(const WellParams& p, const FDGrid& g, int count,
                                  double max_abs_imag = std::numeric_limits<double>::infinity());

/// For each target, the eigenvalue nearest to it.
std::vector<cplx> match_nearest(const std::vector<cplx>& eigenvalues, const std::vector<cplx>& targets);

/// Eigenvector for eigenvalue E by inverse iteration (pivoted tridiagonal LU).
std::vector<cplx> tridiagonal_eigenvector(const Tridiagonal& t, cplx E);

/// The `count` eigenvalues nearest σ by shift-invert subspace iteration,
/// ordered by distance to σ.
std::vector<cplx> nearest_eigenvalues(const Tridiagonal& t, cplx sigma, int count);

/// Λ at which the oracle pair nearest E* = k*² turns complex, by bisection on
/// [(1 − window)Λ*, (1 + window)Λ*]. Throws NoConvergence if the bracket does
/// not straddle the transition.
double oracle_complexification(const WellParams& p, double k_star, double Lambda_star, int N, double window = 0.1,
                               int iterations = 14);

/// Adaptive Gauss–Kronrod integral with absolute error ≤ tol.
/// Throws QuadratureDepthExceeded when the error estimate stays above tol.
double adaptive_quadrature(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace ptwell
