#pragma once

#include <complex>

namespace ptwell {

using cplx = std::complex<double>;

/// Reduced-unit constants. Internally ħ = 1 and m = 1/2, so E = k² and the
/// reduced parameters v₀, v_I, Λ are the native potential strengths.
namespace units {
inline constexpr double hbar = 1.0;
inline constexpr double mass = 0.5;
inline constexpr double hbar_over_m = hbar / mass;                   // 2
inline constexpr double hbar2_over_2m = hbar * hbar / (2.0 * mass);  // 1
inline constexpr double hbar_over_2m = hbar / (2.0 * mass);          // 1
inline constexpr double two_over_hbar = 2.0 / hbar;                  // 2
}  // namespace units

/// Potential strengths in physical units, before reduction.
struct PhysicalParams {
  double V0 = 0.0;
  double VI = 0.0;
  double lambda_strength = 0.0;
  double m = 1.0;
  double hbar = 1.0;
};

/// Reduced parameters of the three-piece well
///   V = v₀ + i v_I (x ≤ −b),  0 (|x| < b),  v₀ − i v_I (x ≥ b),
/// plus Λ δ(x) at the origin.
class WellParams {
 public:
  /// Throws InvalidParameter unless b > 0, vI ≥ 0, Lambda ≥ 0 and all finite.
  WellParams(double v0, double vI, double b, double Lambda);

  double v0() const noexcept { return v0_; }
  double vI() const noexcept { return vI_; }
  double b() const noexcept { return b_; }
  double Lambda() const noexcept { return Lambda_; }

  WellParams with_Lambda(double Lambda) const { return {v0_, vI_, b_, Lambda}; }
  WellParams with_vI(double vI) const { return {v0_, vI, b_, Lambda_}; }
  WellParams with_v0(double v0) const { return {v0, vI_, b_, Lambda_}; }

  friend bool operator==(const WellParams&, const WellParams&) = default;

 private:
  double v0_;
  double vI_;
  double b_;
  double Lambda_;
};

/// (v₀, v_I, b, Λ) = (2mV₀/ħ², 2mV_I/ħ², b, 2mλ/ħ²).
WellParams reduce(const PhysicalParams& p, double b);

/// Decay exponents outside the well.
///
/// alpha = √(v₀ + i v_I − k²) and alpha_tilde = √(v₀ − i v_I − k²), both on
/// the branch with non-negative real part. alpha_r / alpha_i are the real and
/// (absolute) imaginary parts; for real k they come from the closed forms
///   α_R = √((√((v₀−k²)² + v_I²) + (v₀−k²)) / 2)
///   α_I = √((√((v₀−k²)² + v_I²) − (v₀−k²)) / 2)
/// and alpha_tilde is exactly conj(alpha).
struct AlphaPair {
  cplx alpha;
  cplx alpha_tilde;
  double alpha_r = 0.0;
  double alpha_i = 0.0;
};

AlphaPair alpha_pair(const WellParams& p, cplx k);

/// Square root with the Re ≥ 0 branch.
cplx sqrt_re_nonneg(cplx z);

/// α_R and α_I from the real-k closed forms, rearranged to avoid the
/// cancellation in whichever of the two numerators is small.
struct AlphaParts {
  double alpha_r;
  double alpha_i;
};
AlphaParts alpha_parts_real(const WellParams& p, double k);

/// Imaginary part of the potential at x: +v_I for x ≤ −b, −v_I for x ≥ b.
double imaginary_potential(const WellParams& p, double x);

/// Real part of the potential at x, excluding the δ term.
double real_potential(const WellParams& p, double x);

}  // namespace ptwell
