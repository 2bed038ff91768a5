#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ptwell/error.hpp"
#include "ptwell/spectrum.hpp"

namespace ptwell {
namespace {

TEST(SecularFunction, RealOnRealAxisAndConjugateSymmetric) {
  const WellParams p(9, 15, 1, 0.5);
  for (double k : {0.3, 1.7, 3.3, 8.2}) {
    const cplx f = secular_residual(p, k);
    EXPECT_NEAR(f.imag(), 0.0, 1e-12 * secular_scale(p, k));
  }
  for (cplx k : {cplx(1.2, 0.3), cplx(5.0, -0.7), cplx(8.0, 0.05)}) {
    const cplx a = secular_residual(p, std::conj(k));
    const cplx b = std::conj(secular_residual(p, k));
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12 * secular_scale(p, k));
  }
}

TEST(SecularFunction, MatchesPtPhaseSplitOnRealAxis) {
  const WellParams p(9, 15, 1, 0.5);
  for (double k : {0.4, 1.4466, 2.0, 3.9, 6.0}) {
    const double f = secular_residual(p, k).real();
    const double g = pt_phase_residual(p, k);
    ASSERT_NE(g, 0.0);
    const double ratio = f / g;
    // Both vanish together; away from zeros their ratio is a k-dependent
    // positive factor that is the same for every Λ.
    const double ratio2 = secular_residual(p.with_Lambda(3.0), k).real() / pt_phase_residual(p.with_Lambda(3.0), k);
    EXPECT_NEAR(ratio, ratio2, 1e-9 * std::abs(ratio)) << k;
  }
  EXPECT_THROW(pt_phase_residual(p, cplx(1.0, 0.1)), InvalidParameter);
}

TEST(SecularFunction, ExactDerivativesMatchFiniteDifferences) {
  const WellParams p(9, 15, 1, 0.5);
  for (cplx k : {cplx(1.1, 0.0), cplx(2.4, 0.2), cplx(7.7, -0.4)}) {
    const SecularDerivatives d = secular_derivatives(p, k);
    const double h = 1e-5;
    const cplx fk = (secular_residual(p, k + h) - secular_residual(p, k - h)) / (2 * h);
    const cplx fkk = (secular_residual(p, k + h) - 2.0 * secular_residual(p, k) + secular_residual(p, k - h)) / (h * h);
    const cplx fL = (secular_residual(p.with_Lambda(0.5 + h), k) - secular_residual(p.with_Lambda(0.5 - h), k)) / (2 * h);
    const double s = secular_scale(p, k);
    EXPECT_NEAR(std::abs(d.f - secular_residual(p, k)), 0.0, 1e-14 * s);
    EXPECT_NEAR(std::abs(d.f_k - fk), 0.0, 1e-7 * s);
    EXPECT_NEAR(std::abs(d.f_kk - fkk), 0.0, 1e-3 * s);
    EXPECT_NEAR(std::abs(d.f_Lambda - fL), 0.0, 1e-8 * s);
    EXPECT_NEAR(std::abs(secular_derivative_fd(p, k) - d.f_k), 0.0, 1e-6 * s);
  }
}

TEST(RealRoots, HermitianLimitReproducesFiniteWellLevels) {
  for (double v0 : {9.0, 25.0, 60.0}) {
    const WellParams p(v0, 0.0, 1.0, 0.0);
    const auto expected = oracles::finite_well_levels(v0, 1.0);
    const auto roots = find_real_roots(p, std::sqrt(v0) * 0.999);
    ASSERT_EQ(roots.size(), expected.size()) << v0;
    for (std::size_t i = 0; i < roots.size(); ++i) EXPECT_NEAR(roots[i], expected[i], 1e-10) << v0 << " " << i;
  }
}

TEST(RealRoots, AgreeWithZerosOfMatchedTransferMatrix) {
  const WellParams p(9, 15, 1, 0.5);
  const auto roots = find_real_roots(p, 12.0);
  ASSERT_GE(roots.size(), 6u);
  for (double k : roots) {
    // A decaying left tail must leave no growing right tail: m21 = 0.
    const oracles::Mat2 m = oracles::matched_transfer(9, 15, 1, 0.5, k);
    const double scale = std::abs(m.a) + std::abs(m.b) + std::abs(m.c) + std::abs(m.d);
    EXPECT_LT(std::abs(m.c) / scale, 1e-10) << k;
  }
  for (std::size_t i = 1; i < roots.size(); ++i) EXPECT_LT(roots[i - 1], roots[i]);
}

TEST(RealRoots, ArgumentPrincipleCountAgreesWithScan) {
  const WellParams p(9, 15, 1, 0.5);
  const auto roots = find_real_roots(p, 6.0);
  const int zeros = count_zeros_in_box(p, 0.5, 6.0, 0.2);
  // Roots near the box edge aside, the scan finds every zero in the box.
  int inside = 0;
  for (double k : roots) inside += (k > 0.5 && k < 6.0);
  EXPECT_EQ(zeros, inside);
}

TEST(EpBound, CurveAndAsymptotics) {
  const WellParams p(9, 15, 1, 0.5);
  EXPECT_NEAR(ep_bound_curve(p, 2.0), std::hypot(9.0, 15.0) / 2.0, 1e-15);
  EXPECT_THROW(ep_bound_curve(p, 0.0), InvalidParameter);
  EXPECT_FALSE(asymptotic_sin2kb(p, 20.0).has_value());
  const auto s = asymptotic_sin2kb(p, 5.0);
  ASSERT_TRUE(s.has_value());
  EXPECT_LE(std::abs(s->first), 1.0);
  EXPECT_LE(s->second, s->first);
}

TEST(DoubleRoot, SatisfiesBothEquations) {
  const WellParams p(9, 15, 1, 0.5);
  const DoubleRoot d = solve_double_root(p, 2.35, 7.1);
  const SecularDerivatives der = secular_derivatives(p.with_Lambda(d.Lambda_star), d.k_star);
  const double s = secular_scale(p.with_Lambda(d.Lambda_star), d.k_star);
  EXPECT_LT(std::abs(der.f) / s, 1e-12);
  EXPECT_LT(std::abs(der.f_k) / s, 1e-11);
  EXPECT_NEAR(d.k_star, 2.35514, 1e-4);
  EXPECT_NEAR(d.Lambda_star, 7.15588, 1e-4);
}

}  // namespace
}  // namespace ptwell
