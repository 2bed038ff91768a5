#include <gtest/gtest.h>

#include <cmath>

#include "ptwell/error.hpp"
#include "ptwell/well.hpp"

namespace ptwell {
namespace {

TEST(WellParams, RejectsOutOfDomainInput) {
  EXPECT_THROW(WellParams(9, 15, -1, 0.5), InvalidParameter);
  EXPECT_THROW(WellParams(9, 15, 0, 0.5), InvalidParameter);
  EXPECT_THROW(WellParams(9, -1, 1, 0.5), InvalidParameter);
  EXPECT_THROW(WellParams(9, 15, 1, -0.1), InvalidParameter);
  EXPECT_THROW(WellParams(std::nan(""), 15, 1, 0.5), InvalidParameter);
  EXPECT_NO_THROW(WellParams(-3, 0, 1, 0));
}

TEST(WellParams, ReductionScalesByTwoMassOverHbarSquared) {
  PhysicalParams phys;
  phys.V0 = 4.5;
  phys.VI = 7.5;
  phys.lambda_strength = 0.25;
  phys.m = 0.5;
  phys.hbar = 1.0;
  const WellParams p = reduce(phys, 1.0);
  EXPECT_DOUBLE_EQ(p.v0(), 4.5);
  EXPECT_DOUBLE_EQ(p.vI(), 7.5);
  EXPECT_DOUBLE_EQ(p.Lambda(), 0.25);

  phys.m = 1.0;
  phys.hbar = 2.0;
  const WellParams q = reduce(phys, 2.0);
  EXPECT_DOUBLE_EQ(q.v0(), 2.0 * 4.5 / 4.0);
  EXPECT_DOUBLE_EQ(q.b(), 2.0);
}

TEST(Alpha, ClosedFormsMatchPrincipalRoot) {
  const WellParams p(9, 15, 1, 0.5);
  for (double k : {0.01, 0.5, 2.9, 3.0, 3.1, 7.0, 40.0}) {
    const AlphaPair a = alpha_pair(p, k);
    const cplx direct = std::sqrt(cplx(9 - k * k, 15));
    EXPECT_NEAR(std::abs(a.alpha - direct), 0.0, 1e-13 * std::abs(direct)) << k;
    EXPECT_NEAR(std::abs(a.alpha_tilde - std::conj(a.alpha)), 0.0, 1e-14 * std::abs(direct));
    const AlphaParts parts = alpha_parts_real(p, k);
    EXPECT_NEAR(parts.alpha_r, direct.real(), 1e-13 * std::abs(direct));
    EXPECT_NEAR(parts.alpha_i, std::abs(direct.imag()), 1e-13 * std::abs(direct));
    EXPECT_GE(a.alpha.real(), 0.0);
  }
}

TEST(Alpha, SmallImaginaryPartHasNoCancellation) {
  const WellParams p(9, 1e-12, 1, 0);
  const AlphaParts parts = alpha_parts_real(p, 5.0);
  EXPECT_NEAR(parts.alpha_r, 1e-12 / (2 * 4.0), 1e-20);
  EXPECT_NEAR(parts.alpha_i, 4.0, 1e-14);
}

TEST(Alpha, BranchCutKeepsNonNegativeRealPart) {
  EXPECT_GE(sqrt_re_nonneg(cplx(-4, -0.0)).real(), 0.0);
  EXPECT_GE(sqrt_re_nonneg(cplx(-4, 1e-300)).real(), 0.0);
  EXPECT_NEAR(std::abs(sqrt_re_nonneg(cplx(-4, 0)) * sqrt_re_nonneg(cplx(-4, 0)) - cplx(-4, 0)), 0.0, 1e-15);
}

TEST(Potential, IsPtSymmetric) {
  const WellParams p(9, 15, 1, 0.5);
  for (double x : {0.0, 0.5, 1.0, 1.5, 7.0}) {
    EXPECT_DOUBLE_EQ(imaginary_potential(p, x), -imaginary_potential(p, -x));
    EXPECT_DOUBLE_EQ(real_potential(p, x), real_potential(p, -x));
  }
  EXPECT_DOUBLE_EQ(imaginary_potential(p, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(imaginary_potential(p, -2.0), 15.0);
  EXPECT_DOUBLE_EQ(real_potential(p, 2.0), 9.0);
}

}  // namespace
}  // namespace ptwell
