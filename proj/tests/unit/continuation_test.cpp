#include <gtest/gtest.h>

#include <cmath>

#include "ptwell/error.hpp"
#include "ptwell/spectrum.hpp"

namespace ptwell {
namespace {

const WellParams kWell(9, 15, 1, 0.0);

TEST(Continuation, RealBranchStaysOnRoots) {
  const auto roots = find_real_roots(kWell, 3.0);
  ASSERT_FALSE(roots.empty());
  const SpectralBranch br = continue_branch(kWell, roots.front(), {0.0, 1.0}, 0.05);
  ASSERT_GE(br.samples.size(), 2u);
  for (const auto& s : br.samples) {
    const WellParams q = kWell.with_Lambda(s.Lambda);
    EXPECT_LT(std::abs(secular_residual(q, s.k)) / secular_scale(q, s.k), 1e-10);
    EXPECT_LE(std::abs(s.k.imag()), kImagTol);
  }
  for (std::size_t i = 1; i < br.samples.size(); ++i) EXPECT_GT(br.samples[i].Lambda, br.samples[i - 1].Lambda);
}

TEST(Continuation, LowestPairMeetsAtExceptionalPointAndTurnsComplex) {
  const Spectrum sp = trace_spectrum(kWell, {0.0, 8.0}, 0.05, 3.0);
  ASSERT_TRUE(sp.stalled.empty());
  ASSERT_FALSE(sp.eps.empty());
  const EPRecord& ep = sp.eps.front();
  EXPECT_NEAR(ep.k_star, 2.35514, 1e-4);
  EXPECT_LT(ep.residual, 1e-10);
  for (const auto& br : sp.branches) {
    if (br.branch_id != ep.branch_pair.first && br.branch_id != ep.branch_pair.second) continue;
    const BranchSample& last = br.samples.back();
    EXPECT_GT(last.Lambda, ep.Lambda_star);
    EXPECT_GT(std::abs(last.k.imag()), 1e-3);
    ASSERT_TRUE(br.chi.has_value());
    EXPECT_NEAR(*br.chi, ep.Lambda_star * ep.k_star, 1e-9);
  }
}

TEST(Continuation, ComplexPairIsConjugate) {
  const Spectrum sp = trace_spectrum(kWell, {0.0, 8.0}, 0.05, 3.0);
  ASSERT_GE(sp.branches.size(), 2u);
  const cplx a = sp.branches[0].samples.back().k;
  const cplx b = sp.branches[1].samples.back().k;
  EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-8);
}

TEST(Continuation, ZeroStrengthHasNoExceptionalPoints) {
  const Spectrum sp = trace_spectrum(kWell, {0.0, 0.0}, 0.05, 12.0);
  EXPECT_TRUE(sp.eps.empty());
  for (const auto& br : sp.branches) EXPECT_LE(std::abs(br.samples.front().k.imag()), kImagTol);
}

}  // namespace
}  // namespace ptwell
