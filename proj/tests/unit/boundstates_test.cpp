#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ptwell/boundstates.hpp"
#include "ptwell/error.hpp"
#include "ptwell/spectrum.hpp"

namespace ptwell {
namespace {

const WellParams kWell(9, 15, 1, 0.5);

double density_integral(const BoundState& s) {
  const double b = s.params.b();
  const double tail = b + 40.0 / s.alpha.alpha_r;
  auto rho = [&](double x) { return std::norm(bound_wavefunction(s, x).psi); };
  return oracles::simpson(rho, -tail, -b, 20000) + oracles::simpson(rho, -b, 0.0, 4000) +
         oracles::simpson(rho, 0.0, b, 4000) + oracles::simpson(rho, b, tail, 20000);
}

TEST(BoundState, NormalizedBySimpsonQuadrature) {
  for (double k : find_real_roots(kWell, 9.0)) {
    const BoundState s = make_bound_state(kWell, k);
    EXPECT_NEAR(density_integral(s), 1.0, 1e-9) << k;
  }
}

TEST(BoundState, ClosedFormDensityMatchesWavefunction) {
  const BoundState s = make_bound_state(kWell, find_real_roots(kWell, 3.0).front());
  for (double x : {-3.0, -1.0, -0.4, 0.0, 0.7, 1.0, 2.5}) {
    const double rho = std::norm(bound_wavefunction(s, x).psi);
    EXPECT_NEAR(bound_density(s, x), rho, 1e-12 * std::max(1.0, rho)) << x;
  }
}

TEST(BoundState, DensityIsEvenAndContinuous) {
  const BoundState s = make_bound_state(kWell, find_real_roots(kWell, 6.0).back());
  for (double x : {0.2, 0.9, 1.0, 1.3, 4.0}) EXPECT_NEAR(bound_density(s, x), bound_density(s, -x), 1e-13);
  for (double x : {-1.0, 1.0}) {
    const auto l = bound_wavefunction(s, x, Side::Left);
    const auto r = bound_wavefunction(s, x, Side::Right);
    EXPECT_NEAR(std::abs(l.psi - r.psi), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(l.dpsi - r.dpsi), 0.0, 1e-12);
  }
}

TEST(BoundState, DeltaProducesDerivativeJump) {
  const BoundState s = make_bound_state(kWell, find_real_roots(kWell, 3.0).front());
  const auto l = bound_wavefunction(s, 0.0, Side::Left);
  const auto r = bound_wavefunction(s, 0.0, Side::Right);
  EXPECT_NEAR(std::abs(r.dpsi - l.dpsi - kWell.Lambda() * l.psi), 0.0, 1e-13);
}

TEST(BoundState, SolvesSchrodingerEquationOnEachPiece) {
  const BoundState s = make_bound_state(kWell, find_real_roots(kWell, 6.0).back());
  for (double x : {-2.0, -0.5, 0.5, 2.0}) {
    const WavefunctionJet j = bound_wavefunction_jet(s, x, Side::Mean);
    const cplx V(real_potential(kWell, x), imaginary_potential(kWell, x));
    EXPECT_NEAR(std::abs(-j.d2 + V * j.psi - s.E * j.psi), 0.0, 1e-11 * (1 + std::abs(s.E * j.psi)));
  }
}

TEST(BoundState, RejectsNonRoots) {
  EXPECT_THROW(make_bound_state(kWell, 2.0), NoBoundState);
  EXPECT_THROW(make_bound_state(kWell, -1.0), InvalidParameter);
}

TEST(BoundState, SmallImaginaryLimitOfDecayRate) {
  const WellParams p(9, 1e-6, 1, 0.5);
  EXPECT_NEAR(alpha_r_small_vi(p, 2.0), std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(alpha_r_small_vi(p, 4.0), 1e-6 / (2 * std::sqrt(7.0)), 1e-18);
  EXPECT_NEAR(alpha_r_small_vi(p, 2.0), alpha_parts_real(p, 2.0).alpha_r, 1e-10);
  EXPECT_THROW(alpha_r_small_vi(p, 3.0), SingularParameter);
}

}  // namespace
}  // namespace ptwell
