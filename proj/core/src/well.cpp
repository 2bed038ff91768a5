#include "ptwell/well.hpp"

#include <cmath>
#include <string>

#include "ptwell/error.hpp"

namespace ptwell {

WellParams::WellParams(double v0, double vI, double b, double Lambda)
    : v0_(v0), vI_(vI), b_(b), Lambda_(Lambda) {
  if (!std::isfinite(v0) || !std::isfinite(vI) || !std::isfinite(b) || !std::isfinite(Lambda)) {
    throw InvalidParameter("well parameters must be finite");
  }
  if (b <= 0.0) throw InvalidParameter("half-width b must be positive, got " + std::to_string(b));
  if (vI < 0.0) throw InvalidParameter("imaginary strength vI must be >= 0, got " + std::to_string(vI));
  if (Lambda < 0.0) throw InvalidParameter("delta strength Lambda must be >= 0, got " + std::to_string(Lambda));
}

WellParams reduce(const PhysicalParams& p, double b) {
  if (!(p.m > 0.0)) throw InvalidParameter("mass must be positive");
  if (!(p.hbar > 0.0)) throw InvalidParameter("hbar must be positive");
  const double scale = 2.0 * p.m / (p.hbar * p.hbar);
  return {scale * p.V0, scale * p.VI, b, scale * p.lambda_strength};
}

cplx sqrt_re_nonneg(cplx z) {
  cplx s = std::sqrt(z);
  if (s.real() < 0.0) s = -s;
  return s;
}

AlphaParts alpha_parts_real(const WellParams& p, double k) {
  const double d = p.v0() - k * k;
  const double r = std::hypot(d, p.vI());
  // The larger of the two parts is computed directly; the other follows from
  // 2 α_R α_I = v_I.
  if (d >= 0.0) {
    const double ar = std::sqrt(0.5 * (r + d));
    const double ai = ar > 0.0 ? 0.5 * p.vI() / ar : 0.0;
    return {ar, ai};
  }
  const double ai = std::sqrt(0.5 * (r - d));
  const double ar = ai > 0.0 ? 0.5 * p.vI() / ai : 0.0;
  return {ar, ai};
}

AlphaPair alpha_pair(const WellParams& p, cplx k) {
  AlphaPair out;
  if (k.imag() == 0.0) {
    const double kr = k.real();
    const AlphaParts parts = alpha_parts_real(p, kr);
    out.alpha_r = parts.alpha_r;
    out.alpha_i = parts.alpha_i;
    // For real k, Im α ≥ 0 since 2 α_R α_I = v_I ≥ 0 and α_R ≥ 0.
    out.alpha = cplx(parts.alpha_r, parts.alpha_i);
    out.alpha_tilde = std::conj(out.alpha);
    return out;
  }
  const cplx k2 = k * k;
  out.alpha = sqrt_re_nonneg(cplx(p.v0(), p.vI()) - k2);
  out.alpha_tilde = sqrt_re_nonneg(cplx(p.v0(), -p.vI()) - k2);
  out.alpha_r = out.alpha.real();
  out.alpha_i = std::abs(out.alpha.imag());
  return out;
}

double imaginary_potential(const WellParams& p, double x) {
  if (x <= -p.b()) return p.vI();
  if (x >= p.b()) return -p.vI();
  return 0.0;
}

double real_potential(const WellParams& p, double x) {
  return std::abs(x) >= p.b() ? p.v0() : 0.0;
}

}  // namespace ptwell
