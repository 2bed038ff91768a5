#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ptwell/error.hpp"
#include "ptwell/scattering.hpp"
#include "ptwell/spectrum.hpp"

namespace ptwell {
namespace {

const WellParams kWell(9, 15, 1, 0.5);

double matrix_scale(const oracles::Mat2& m) {
  return std::abs(m.a) + std::abs(m.b) + std::abs(m.c) + std::abs(m.d);
}

TEST(TransferMatrix, MatchesInterfaceMatching) {
  for (double k : {0.05, 0.8, 2.9, 3.0, 4.4, 9.5}) {
    const TransferMatrix t = transfer_matrix(kWell, k);
    const oracles::Mat2 m = oracles::matched_transfer(9, 15, 1, 0.5, k);
    const double s = matrix_scale(m);
    EXPECT_NEAR(std::abs(t.m11 - m.a), 0.0, 1e-12 * s) << k;
    EXPECT_NEAR(std::abs(t.m12 - m.b), 0.0, 1e-12 * s) << k;
    EXPECT_NEAR(std::abs(t.m21 - m.c), 0.0, 1e-12 * s) << k;
    EXPECT_NEAR(std::abs(t.m22 - m.d), 0.0, 1e-12 * s) << k;
  }
}

TEST(TransferMatrix, DeterminantIsRatioOfDecayExponents) {
  for (double k : {0.3, 2.0, 7.0}) {
    const TransferMatrix t = transfer_matrix(kWell, k);
    const AlphaPair a = alpha_pair(kWell, k);
    const cplx expected = -a.alpha / std::conj(a.alpha);
    EXPECT_NEAR(std::abs(transfer_determinant(kWell, k) - expected), 0.0, 1e-14);
    const cplx det = t.m11 * t.m22 - t.m12 * t.m21;
    EXPECT_NEAR(std::abs(det - expected), 0.0, 1e-12 * std::abs(t.m11 * t.m22));
  }
}

TEST(TransferMatrix, SingularInputsThrow) {
  EXPECT_THROW(transfer_matrix(kWell, 0.0), SingularParameter);
  EXPECT_THROW(transfer_matrix(WellParams(9, 0, 1, 0.5), 3.0), SingularParameter);
}

TEST(Coefficients, ExplicitAndMatrixRoutesAgree) {
  for (double k : {0.1, 1.0, 3.5, 6.2, 12.0}) {
    const Coefficients a = explicit_coefficients(kWell, k);
    const Coefficients b = coefficients_from_matrix(transfer_matrix(kWell, k));
    EXPECT_NEAR(std::abs(a.t_plus - b.t_plus), 0.0, 1e-11 * std::max(1.0, std::abs(a.t_plus)));
    EXPECT_NEAR(std::abs(a.r_plus - b.r_plus), 0.0, 1e-11 * std::max(1.0, std::abs(a.r_plus)));
    EXPECT_NEAR(std::abs(a.r_minus - b.r_minus), 0.0, 1e-11 * std::max(1.0, std::abs(a.r_minus)));
    EXPECT_NEAR(std::abs(a.t_minus - b.t_minus), 0.0, 1e-11 * std::max(1.0, std::abs(a.t_minus)));
  }
}

TEST(Coefficients, InverseMatrixFromCoefficients) {
  const TransferMatrix m = transfer_matrix(kWell, 2.2);
  const TransferMatrix inv = inverse_from_coefficients(coefficients_from_matrix(m));
  const cplx p11 = inv.m11 * m.m11 + inv.m12 * m.m21;
  const cplx p12 = inv.m11 * m.m12 + inv.m12 * m.m22;
  const cplx p21 = inv.m21 * m.m11 + inv.m22 * m.m21;
  const cplx p22 = inv.m21 * m.m12 + inv.m22 * m.m22;
  const double s = std::abs(inv.m11 * m.m11) + std::abs(inv.m12 * m.m21) + std::abs(inv.m22 * m.m22);
  EXPECT_NEAR(std::abs(p11 - 1.0), 0.0, 1e-12 * s);
  EXPECT_NEAR(std::abs(p12), 0.0, 1e-12 * s);
  EXPECT_NEAR(std::abs(p21), 0.0, 1e-12 * s);
  EXPECT_NEAR(std::abs(p22 - 1.0), 0.0, 1e-12 * s);
}

TEST(Coefficients, HermitianSquareWellTransmission) {
  const WellParams p(9, 0, 1, 0);
  for (double k : {3.2, 4.0, 5.5, 9.0}) {
    const ScatterData d = scattering_coefficients(p, k);
    EXPECT_NEAR(d.T, oracles::square_well_transmission(9, 1, k), 1e-12) << k;
  }
}

TEST(Coefficients, LoneDeltaTransmission) {
  const WellParams p(0, 0, 1, 2.5);
  for (double k : {0.3, 1.0, 4.0}) {
    const ScatterData d = scattering_coefficients(p, k);
    EXPECT_NEAR(d.T, oracles::delta_transmission(2.5, k), 1e-12) << k;
    EXPECT_NEAR(d.T + d.R_plus, 1.0, 1e-12) << k;
  }
}

TEST(Coefficients, GeneralizedUnitarity) {
  int anomalous = 0;
  for (int i = 1; i <= 400; ++i) {
    const double k = 0.025 * i;
    const ScatterData d = scattering_coefficients(kWell, k);
    if (d.singular) continue;
    EXPECT_LT(unitarity_check(d), 1e-10) << k;
    EXPECT_EQ(d.sign_used, unitarity_sign(d.T));
    anomalous += d.T > 1.0;
  }
  EXPECT_GT(anomalous, 0);
}

TEST(Coefficients, LeftReflectionVanishesAtBoundStates) {
  for (double k : find_real_roots(kWell, 12.0)) {
    const ScatterData d = scattering_coefficients(kWell, k);
    EXPECT_LT(std::abs(d.r_plus), 1e-8) << k;
  }
}

TEST(Coefficients, TransmissionIsDirectionIndependent) {
  for (double k : {0.7, 3.3, 8.8}) {
    const ScatterData d = scattering_coefficients(kWell, k);
    EXPECT_NEAR(std::norm(d.t_plus), std::norm(d.t_minus), 1e-12 * std::max(1.0, d.T));
  }
}

TEST(ScatteringWavefunction, ContinuousWithDeltaKink) {
  for (Incidence dir : {Incidence::LeftToRight, Incidence::RightToLeft}) {
    for (double x : {-1.0, 1.0}) {
      const auto l = scattering_wavefunction(kWell, 2.7, dir, x, Side::Left);
      const auto r = scattering_wavefunction(kWell, 2.7, dir, x, Side::Right);
      EXPECT_NEAR(std::abs(l.psi - r.psi), 0.0, 1e-11 * std::max(1.0, std::abs(l.psi)));
      EXPECT_NEAR(std::abs(l.dpsi - r.dpsi), 0.0, 1e-11 * std::max(1.0, std::abs(l.dpsi)));
    }
    const auto l = scattering_wavefunction(kWell, 2.7, dir, 0.0, Side::Left);
    const auto r = scattering_wavefunction(kWell, 2.7, dir, 0.0, Side::Right);
    EXPECT_NEAR(std::abs(r.dpsi - l.dpsi - 0.5 * l.psi), 0.0, 1e-11 * std::max(1.0, std::abs(l.psi)));
  }
}

}  // namespace
}  // namespace ptwell
