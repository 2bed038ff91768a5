#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ptwell/error.hpp"
#include "ptwell/oracle.hpp"
#include "ptwell/spectrum.hpp"

namespace ptwell {
namespace {

TEST(FDGrid, BoundaryPointsAreNodes) {
  const WellParams p(9, 15, 1, 0.5);
  const FDGrid g = make_grid(p, 401, 6.0);
  EXPECT_GE(g.L, 6.0);
  EXPECT_NEAR(g.x(g.delta_index), 0.0, 1e-12);
  const double m = p.b() / g.h;
  EXPECT_NEAR(m, std::round(m), 1e-9);
  EXPECT_THROW(make_grid(p, 400, 6.0), InvalidParameter);
  EXPECT_THROW(make_grid(p, 401, 0.5), InvalidParameter);
}

TEST(FDOracle, FreeBoxReproducesDiscreteLaplacian) {
  const WellParams p(0, 0, 1, 0);
  const FDGrid g = make_grid(p, 201, 3.0);
  const auto expected = oracles::dirichlet_laplacian_levels(g.N, g.h);
  auto got = tridiagonal_eigenvalues(discretize(p, g));
  std::sort(got.begin(), got.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i].real(), expected[i], 1e-9 * expected.back());
    EXPECT_NEAR(got[i].imag(), 0.0, 1e-9 * expected.back());
  }
}

TEST(FDOracle, QlAgreesWithDenseOnRandomComplexSymmetric) {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tridiagonal t;
  for (int i = 0; i < 60; ++i) t.diag.emplace_back(4.0 * u(rng), u(rng));
  for (int i = 0; i < 59; ++i) t.off.emplace_back(1.0 + 0.5 * u(rng), 0.3 * u(rng));
  auto ql = tridiagonal_eigenvalues(t);
  const auto dense = dense_eigenvalues(t);
  ASSERT_EQ(ql.size(), dense.size());
  const auto matched = match_nearest(dense, ql);
  for (std::size_t i = 0; i < ql.size(); ++i) EXPECT_NEAR(std::abs(ql[i] - matched[i]), 0.0, 1e-9);
}

TEST(FDOracle, ShiftInvertFindsNearestEigenvalues) {
  const WellParams p(9, 15, 1, 0.5);
  const FDGrid g = make_grid(p, 401, 6.0);
  const Tridiagonal t = discretize(p, g);
  const auto all = tridiagonal_eigenvalues(t);
  const cplx sigma(5.0, 0.0);
  const auto near = nearest_eigenvalues(t, sigma, 3);
  ASSERT_EQ(near.size(), 3u);
  auto sorted = all;
  std::sort(sorted.begin(), sorted.end(), [&](cplx a, cplx b) { return std::abs(a - sigma) < std::abs(b - sigma); });
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(near[i] - sorted[i]), 0.0, 1e-8);
}

TEST(FDOracle, EigenvectorSatisfiesDiscreteEquation) {
  const WellParams p(9, 15, 1, 0.5);
  const FDGrid g = make_grid(p, 401, 6.0);
  const Tridiagonal t = discretize(p, g);
  const auto levels = oracle_spectrum(p, g, 2);
  const auto v = tridiagonal_eigenvector(t, levels.front());
  double res = 0.0, norm = 0.0;
  for (int i = 0; i < g.N; ++i) {
    cplx r = t.diag[i] * v[i] - levels.front() * v[i];
    if (i > 0) r += t.off[i - 1] * v[i - 1];
    if (i + 1 < g.N) r += t.off[i] * v[i + 1];
    res = std::max(res, std::abs(r));
    norm = std::max(norm, std::abs(v[i]));
  }
  EXPECT_LT(res / norm, 1e-8 * std::abs(t.diag[0]));
}

TEST(FDOracle, ConvergesToAnalyticLevels) {
  const WellParams p(9, 15, 1, 0.5);
  const auto roots = find_real_roots(p, 3.0);
  const double L = box_half_length(p, roots.front());
  double prev = 0.0;
  for (int N : {801, 1601}) {
    const FDGrid g = make_grid(p, N, L);
    const auto e = match_nearest(oracle_spectrum(p, g, 6), {cplx(roots[0] * roots[0], 0.0)});
    const double err = std::abs(e[0] - roots[0] * roots[0]);
    if (prev > 0.0) EXPECT_LT(err, prev / 3.0);
    prev = err;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Quadrature, KnownIntegrals) {
  EXPECT_NEAR(adaptive_quadrature([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-13), 2.0, 1e-12);
  EXPECT_NEAR(adaptive_quadrature([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-13), std::sqrt(M_PI),
              1e-12);
  EXPECT_NEAR(adaptive_quadrature([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 50.0, 1e-12), std::atan(50.0),
              1e-12);
}

TEST(Quadrature, UnreachableToleranceThrows) {
  // Relative refinement cannot resolve an endpoint square-root singularity.
  EXPECT_THROW(adaptive_quadrature([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12), QuadratureDepthExceeded);
  EXPECT_THROW(adaptive_quadrature([](double x) { return x; }, 0.0, 1.0, 0.0), InvalidParameter);
}

}  // namespace
}  // namespace ptwell
