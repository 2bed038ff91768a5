#include "ptwell/boundstates.hpp"

#include <cmath>
#include <string>

#include "ptwell/error.hpp"
#include "ptwell/spectrum.hpp"

namespace ptwell {

namespace {

// Shared trigonometric factors of the closed forms at kb.
struct Factors {
  double c;     // cos kb
  double s;     // sin kb
  double even;  // k cos kb + α_R sin kb
  double g;     // cos kb + (Λ/2k) sin kb
};

Factors factors(const WellParams& p, double k, double alpha_r) {
  Factors f;
  f.c = std::cos(k * p.b());
  f.s = std::sin(k * p.b());
  f.even = k * f.c + alpha_r * f.s;
  f.g = f.c + 0.5 * p.Lambda() / k * f.s;
  return f;
}

WavefunctionJet scaled(const WavefunctionJet& j, cplx a) {
  return {j.psi * a, j.d1 * a, j.d2 * a, j.d3 * a};
}

WavefunctionJet average(const WavefunctionJet& l, const WavefunctionJet& r) {
  return {0.5 * (l.psi + r.psi), 0.5 * (l.d1 + r.d1), 0.5 * (l.d2 + r.d2), 0.5 * (l.d3 + r.d3)};
}

enum class Piece { Left, Inner, Right };

WavefunctionJet piece_jet(const BoundState& st, double x, Piece piece, double sgn) {
  const WellParams& p = st.params;
  const double k = st.k;
  const double b = p.b();
  const cplx a = st.alpha.alpha;
  const Factors f = factors(p, k, st.alpha.alpha_r);

  if (piece == Piece::Left) {
    const cplx amp = std::exp(a * (x + b)) * (k * f.c + std::conj(a) * f.s) * f.g;
    return {amp, a * amp, a * a * amp, a * a * a * amp};
  }
  if (piece == Piece::Right) {
    const cplx m = -std::conj(a);
    const cplx amp = std::exp(m * (x - b)) * (k * f.c + a * f.s) * f.g;
    return {amp, m * amp, m * m * amp, m * m * m * amp};
  }
  const double cx = std::cos(k * x);
  const double sx = std::sin(k * x);
  const double half_L = 0.5 * p.Lambda();
  const double e0 = cx + half_L / k * sgn * sx;
  const double e1 = -k * sx + half_L * sgn * cx;
  const double o0 = sx;
  const double o1 = k * cx;
  const cplx odd_amp(0.0, st.alpha.alpha_i * f.g);
  const cplx psi = f.even * e0 + odd_amp * o0;
  const cplx d1 = f.even * e1 + odd_amp * o1;
  return {psi, d1, -k * k * psi, -k * k * d1};
}

}  // namespace

BoundState make_bound_state(const WellParams& p, double k) {
  if (!(k > 0.0)) throw InvalidParameter("bound state requires k > 0");
  const double res = std::abs(secular_residual(p, k));
  if (res > 1e-9 * secular_scale(p, k)) {
    throw NoBoundState("k = " + std::to_string(k) + " is not a root of the secular equation");
  }
  BoundState st;
  st.k = k;
  st.E = k * k;
  st.params = p;
  st.alpha = alpha_pair(p, k);
  st.c1_sq = normalization_constant(p, k);
  return st;
}

WavefunctionJet bound_wavefunction_jet(const BoundState& s, double x, Side side) {
  const double b = s.params.b();
  WavefunctionJet j;
  if (x < -b) {
    j = piece_jet(s, x, Piece::Left, -1.0);
  } else if (x > b) {
    j = piece_jet(s, x, Piece::Right, 1.0);
  } else if (x == -b) {
    const auto l = piece_jet(s, x, Piece::Left, -1.0);
    const auto r = piece_jet(s, x, Piece::Inner, -1.0);
    j = side == Side::Left ? l : side == Side::Right ? r : average(l, r);
  } else if (x == b) {
    const auto l = piece_jet(s, x, Piece::Inner, 1.0);
    const auto r = piece_jet(s, x, Piece::Right, 1.0);
    j = side == Side::Left ? l : side == Side::Right ? r : average(l, r);
  } else if (x == 0.0) {
    const auto l = piece_jet(s, x, Piece::Inner, -1.0);
    const auto r = piece_jet(s, x, Piece::Inner, 1.0);
    j = side == Side::Left ? l : side == Side::Right ? r : average(l, r);
  } else {
    j = piece_jet(s, x, Piece::Inner, x > 0.0 ? 1.0 : -1.0);
  }
  return scaled(j, std::sqrt(s.c1_sq));
}

WavefunctionSample bound_wavefunction(const BoundState& s, double x, Side side) {
  const WavefunctionJet j = bound_wavefunction_jet(s, x, side);
  return {x, j.psi, j.d1};
}

double bound_density(const BoundState& s, double x) {
  const WellParams& p = s.params;
  const double k = s.k;
  const double b = p.b();
  const double ar = s.alpha.alpha_r;
  const double ai = s.alpha.alpha_i;
  const Factors f = factors(p, k, ar);
  if (std::abs(x) < b) {
    const double sg = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    const double e = std::cos(k * x) + 0.5 * p.Lambda() / k * sg * std::sin(k * x);
    const double o = std::sin(k * x);
    return s.c1_sq * (e * e * f.even * f.even + ai * ai * f.g * f.g * o * o);
  }
  return s.c1_sq * std::exp(-2.0 * ar * (std::abs(x) - b)) * k * f.even * f.g;
}

double normalization_denominator(const WellParams& p, double k) {
  const AlphaParts a = alpha_parts_real(p, k);
  const double L = p.Lambda();
  const double b = p.b();
  const Factors f = factors(p, k, a.alpha_r);
  const double k2 = k * k;
  const double P2 = f.even * f.even;
  const double g2 = f.g * f.g;
  const double ai2 = a.alpha_i * a.alpha_i;
  const double bracket = 2.0 * f.s * ((4.0 * k2 - L * L) * f.c + 4.0 * k * L * f.s) * P2 -
                         4.0 * k2 * ai2 * std::sin(2.0 * k * b) * g2 +
                         2.0 * k * b * ((4.0 * k2 + L * L) * P2 + 4.0 * k2 * ai2 * g2);
  return a.alpha_r * bracket + 8.0 * k2 * k2 * f.even * f.g;
}

double normalization_constant(const WellParams& p, double k) {
  if (!(k > 0.0)) throw InvalidParameter("normalization requires k > 0");
  const AlphaParts a = alpha_parts_real(p, k);
  if (!(a.alpha_r > 0.0)) throw InvalidParameter("normalization requires alpha_R > 0 (state is not localized)");
  const double D = normalization_denominator(p, k);
  if (!(D > 0.0)) throw NoBoundState("D(k) <= 0 at k = " + std::to_string(k));
  return 8.0 * a.alpha_r * k * k * k / D;
}

double alpha_r_small_vi(const WellParams& p, double k) {
  const double d = p.v0() - k * k;
  if (d == 0.0) throw SingularParameter("small-vI asymptotics are singular at k^2 = v0");
  if (d > 0.0) return std::sqrt(d);
  return p.vI() / (2.0 * std::sqrt(-d));
}

}  // namespace ptwell
