#pragma once

#include "ptwell/boundstates.hpp"
#include "ptwell/well.hpp"

namespace ptwell {

/// M⁺ maps the left amplitudes (A₁, A₂) of A₁e^{αx} + A₂e^{−αx} onto the
/// right amplitudes (B₂, B₁) of B₁e^{α*x} + B₂e^{−α*x}.
struct TransferMatrix {
  cplx m11, m12, m21, m22;
  cplx det;
};

/// Closed-form entries of M⁺ at real k ≠ 0. Throws SingularParameter when
/// k = 0 or α = 0 (v_I = 0 and k² = v₀).
TransferMatrix transfer_matrix(const WellParams& p, double k);

/// −α/α*, the determinant of M⁺.
cplx transfer_determinant(const WellParams& p, double k);

struct Coefficients {
  cplx t_plus;   // A₂/B₁, right-to-left transmission
  cplx r_plus;   // A₂/A₁, left reflection
  cplx r_minus;  // B₂/B₁, right reflection
  cplx t_minus;  // B₂/A₁, left-to-right transmission
};

/// Explicit closed-form coefficients (common denominator form).
Coefficients explicit_coefficients(const WellParams& p, double k);

/// t₊ = 1/m22, r₊ = −m21/m22, r₋ = m12/m22, t₋ = det/m22.
Coefficients coefficients_from_matrix(const TransferMatrix& m);

/// M⁻ = (M⁺)⁻¹ written through the coefficients:
///   [[1/t₋, −r₋/t₋], [r₊/t₋, t₊ − r₊r₋/t₋]].
TransferMatrix inverse_from_coefficients(const Coefficients& c);

struct ScatterData {
  double k = 0.0;
  cplx r_plus, r_minus, t_plus, t_minus;
  double T = 0.0;  // |t₊|² = |t₋|²
  double R_plus = 0.0;
  double R_minus = 0.0;
  double unitarity_residual = 0.0;
  int sign_used = 1;
  bool singular = false;  // |m22| tiny: spectral-singularity candidate
};

/// Coefficients through both routes (explicit and matrix), cross-checked to
/// 1e-10 relative (ConsistencyError otherwise), plus pseudo-coefficients and
/// the generalized unitarity residual. A near-vanishing denominator is
/// flagged in `singular` rather than reported as an error.
ScatterData scattering_coefficients(const WellParams& p, double k);

/// −1 where T > 1 (anomalous transmission), +1 otherwise.
int unitarity_sign(double T);

/// |T + s·|r₊r₋| − 1| with s = unitarity_sign(T).
double unitarity_check(const ScatterData& d);

enum class Incidence { LeftToRight, RightToLeft };

/// ψ₊ (unit A₁) or ψ₋ (unit B₁) and its derivative at x.
WavefunctionSample scattering_wavefunction(const WellParams& p, double k, Incidence dir, double x,
                                           Side side = Side::Mean);

}  // namespace ptwell
