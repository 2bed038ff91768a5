#pragma once

#include "ptwell/well.hpp"

namespace ptwell {

/// A normalized bound state in the PT-symmetric phase (real k).
struct BoundState {
  double k = 0.0;
  double E = 0.0;      // k²
  double c1_sq = 0.0;  // |C₁|²
  WellParams params{0.0, 0.0, 1.0, 0.0};
  AlphaPair alpha;
};

/// Builds the normalized state at a root k of the secular equation.
/// Throws NoBoundState if |f(k)| > 1e-9·scale, InvalidParameter for k ≤ 0,
/// and propagates normalization_constant errors.
BoundState make_bound_state(const WellParams& p, double k);

/// Which one-sided limit to report at x ∈ {−b, 0, b}. Mean averages the two
/// one-sided values (only differs from either side at x = 0).
enum class Side { Left, Right, Mean };

struct WavefunctionSample {
  double x = 0.0;
  cplx psi;
  cplx dpsi;
};

/// ψ and its first three derivatives on the piece containing x. Derivatives of
/// order ≥ 2 are the piecewise classical ones (no distributional terms).
struct WavefunctionJet {
  cplx psi;
  cplx d1;
  cplx d2;
  cplx d3;
};

/// ψ(x) = |C₁|·{ interior: (cos kx + (Λ/2k) sgn x sin kx)(α_R sin kb + k cos kb)
///                         + i α_I (cos kb + (Λ/2k) sin kb) sin kx,
///               x ≤ −b:   e^{α(x+b)} (k cos kb + α* sin kb)(cos kb + (Λ/2k) sin kb),
///               x ≥ b:    e^{−α*(x−b)} (k cos kb + α sin kb)(cos kb + (Λ/2k) sin kb) }.
WavefunctionSample bound_wavefunction(const BoundState& s, double x, Side side = Side::Mean);
WavefunctionJet bound_wavefunction_jet(const BoundState& s, double x, Side side);

/// Closed-form |ψ(x)|². Exterior: |C₁|² e^{−2α_R(|x|−b)} k (k cos kb + α_R sin kb)(cos kb + (Λ/2k) sin kb).
double bound_density(const BoundState& s, double x);

/// Four-term normalization denominator D(k).
double normalization_denominator(const WellParams& p, double k);

/// |C₁|² = 8 α_R k³ / D(k), which makes ∫ρ_D dx = 1.
/// Throws InvalidParameter for k ≤ 0 or α_R = 0, and NoBoundState if D(k) ≤ 0.
double normalization_constant(const WellParams& p, double k);

/// Leading-order α_R as v_I → 0: √(v₀ − k²) for k² < v₀, v_I / (2√(k² − v₀))
/// for k² > v₀. Throws SingularParameter at k² = v₀.
double alpha_r_small_vi(const WellParams& p, double k);

}  // namespace ptwell
