#include "ptwell/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "ptwell/error.hpp"

namespace ptwell {

namespace {

constexpr cplx I(0.0, 1.0);

struct Pieces {
  AlphaPair a;
  double abs2;  // |α|²
  double k2;
  double s2;  // sin 2kb
  double c2;  // cos 2kb
  double L;
  double b;
};

Pieces pieces(const WellParams& p, double k) {
  if (k == 0.0) throw SingularParameter("scattering quantities are singular at k = 0");
  Pieces q;
  q.a = alpha_pair(p, k);
  q.abs2 = std::norm(q.a.alpha);
  if (q.abs2 == 0.0) throw SingularParameter("alpha = 0 (vI = 0 and k^2 = v0)");
  q.k2 = k * k;
  q.s2 = std::sin(2.0 * k * p.b());
  q.c2 = std::cos(2.0 * k * p.b());
  q.L = p.Lambda();
  q.b = p.b();
  return q;
}

// Common denominator of the explicit coefficients and its term-magnitude scale.
struct Denominator {
  cplx value;
  double scale;
};

Denominator denominator(const Pieces& q, double k) {
  const double ai = q.a.alpha_i;
  const cplx t1 = -2.0 * k * q.s2 * (q.abs2 + q.k2 + I * q.L * ai);
  const cplx t2 = q.c2 * (q.abs2 * q.L + q.k2 * (q.L - 4.0 * I * ai));
  const double t3 = q.L * (q.k2 - q.abs2);
  return {t1 + t2 + t3, std::abs(t1) + std::abs(t2) + std::abs(t3)};
}

// Numerators shared between r± and the off-diagonal entries of M⁺.
double numerator_r_minus(const Pieces& q, double k) {
  const double ar = q.a.alpha_r;
  return 2.0 * k * q.s2 * (q.L * ar - (q.abs2 - q.k2)) + q.c2 * (q.abs2 * q.L + q.k2 * (4.0 * ar - q.L)) -
         q.L * (q.k2 + q.abs2);
}

double numerator_r_plus(const Pieces& q, double k) {
  const double ar = q.a.alpha_r;
  return 2.0 * k * q.s2 * (q.L * ar + (q.abs2 - q.k2)) + q.c2 * (q.k2 * (4.0 * ar + q.L) - q.abs2 * q.L) +
         q.L * (q.k2 + q.abs2);
}

}  // namespace

cplx transfer_determinant(const WellParams& p, double k) {
  const AlphaPair a = alpha_pair(p, k);
  return -a.alpha / std::conj(a.alpha);
}

TransferMatrix transfer_matrix(const WellParams& p, double k) {
  const Pieces q = pieces(p, k);
  const cplx alpha = q.a.alpha;
  const double ar = q.a.alpha_r;
  const double ai = q.a.alpha_i;
  const cplx den4 = 4.0 * std::conj(alpha) * q.k2;

  TransferMatrix m;
  m.m11 = std::exp(-2.0 * I * q.b * ai) *
          (2.0 * k * q.s2 * ((q.abs2 + q.k2) - I * q.L * ai) - q.c2 * (q.abs2 * q.L + q.k2 * (4.0 * I * ai + q.L)) -
           q.L * (q.k2 - q.abs2)) /
          den4;
  m.m12 = std::exp(2.0 * q.b * ar) * numerator_r_minus(q, k) / den4;
  m.m21 = std::exp(-2.0 * q.b * ar) * numerator_r_plus(q, k) / den4;
  m.m22 = std::exp(2.0 * I * q.b * ai) * denominator(q, k).value / den4;
  m.det = m.m11 * m.m22 - m.m12 * m.m21;
  return m;
}

Coefficients explicit_coefficients(const WellParams& p, double k) {
  const Pieces q = pieces(p, k);
  const cplx alpha = q.a.alpha;
  const cplx den = denominator(q, k).value;
  const cplx phase = std::exp(-2.0 * I * q.b * q.a.alpha_i);
  Coefficients c;
  c.t_plus = 4.0 * std::conj(alpha) * q.k2 * phase / den;
  c.r_minus = numerator_r_minus(q, k) * std::exp(2.0 * q.b * std::conj(alpha)) / den;
  c.r_plus = -numerator_r_plus(q, k) * std::exp(-2.0 * q.b * alpha) / den;
  c.t_minus = -4.0 * alpha * q.k2 * phase / den;
  return c;
}

Coefficients coefficients_from_matrix(const TransferMatrix& m) {
  Coefficients c;
  c.t_plus = 1.0 / m.m22;
  c.r_plus = -m.m21 / m.m22;
  c.r_minus = m.m12 / m.m22;
  c.t_minus = m.det / m.m22;
  return c;
}

TransferMatrix inverse_from_coefficients(const Coefficients& c) {
  TransferMatrix m;
  m.m11 = 1.0 / c.t_minus;
  m.m12 = -c.r_minus / c.t_minus;
  m.m21 = c.r_plus / c.t_minus;
  m.m22 = c.t_plus - c.r_plus * c.r_minus / c.t_minus;
  m.det = m.m11 * m.m22 - m.m12 * m.m21;
  return m;
}

int unitarity_sign(double T) { return T > 1.0 ? -1 : 1; }

double unitarity_check(const ScatterData& d) {
  const int s = unitarity_sign(d.T);
  return std::abs(d.T + s * std::abs(d.r_plus * d.r_minus) - 1.0);
}

ScatterData scattering_coefficients(const WellParams& p, double k) {
  const Pieces q = pieces(p, k);
  const Coefficients ex = explicit_coefficients(p, k);
  const Coefficients mx = coefficients_from_matrix(transfer_matrix(p, k));

  auto agree = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-10 * std::max({1.0, std::abs(a), std::abs(b)}); };
  if (!agree(ex.t_plus, mx.t_plus) || !agree(ex.r_plus, mx.r_plus) || !agree(ex.r_minus, mx.r_minus) ||
      !agree(ex.t_minus, mx.t_minus)) {
    throw ConsistencyError("explicit and transfer-matrix coefficients disagree at k = " + std::to_string(k));
  }

  ScatterData d;
  d.k = k;
  d.t_plus = ex.t_plus;
  d.r_plus = ex.r_plus;
  d.r_minus = ex.r_minus;
  d.t_minus = ex.t_minus;
  d.T = std::norm(ex.t_plus);
  d.R_plus = std::norm(ex.r_plus);
  d.R_minus = std::norm(ex.r_minus);
  d.sign_used = unitarity_sign(d.T);
  d.unitarity_residual = unitarity_check(d);
  const Denominator den = denominator(q, k);
  d.singular = std::abs(den.value) < 1e-8 * den.scale;
  return d;
}

namespace {

struct Local {
  cplx psi;
  cplx d1;
};

Local free_from_origin(double k, cplx psi0, cplx dpsi0, double x) {
  const double c = std::cos(k * x);
  const double s = std::sin(k * x);
  return {psi0 * c + dpsi0 * s / k, -k * psi0 * s + dpsi0 * c};
}

Local left_to_right(const WellParams& p, double k, const Coefficients& co, const AlphaPair& a, double x,
                    bool left_limit) {
  const double b = p.b();
  const cplx al = a.alpha;
  const cplx alc = std::conj(al);
  const bool in_left = x < -b || (x == -b && left_limit);
  const bool in_right = x > b || (x == b && !left_limit);
  if (in_left) {
    const cplx e1 = std::exp(al * x);
    const cplx e2 = co.r_plus * std::exp(-al * x);
    return {e1 + e2, al * (e1 - e2)};
  }
  if (in_right) {
    const cplx v = co.t_minus * std::exp(-alc * x);
    return {v, -alc * v};
  }
  const cplx amp = co.t_minus * std::exp(-alc * b);
  auto inner_right = [&](double xx) {
    const double c = std::cos(k * (b - xx));
    const double s = std::sin(k * (b - xx));
    return Local{amp * (c + alc / k * s), amp * (k * s - alc * c)};
  };
  if (x > 0.0 || (x == 0.0 && !left_limit)) return inner_right(x);
  const Local at0 = inner_right(0.0);
  const cplx d0_left = at0.d1 - p.Lambda() * at0.psi;
  return free_from_origin(k, at0.psi, d0_left, x);
}

Local right_to_left(const WellParams& p, double k, const Coefficients& co, const AlphaPair& a, double x,
                    bool left_limit) {
  const double b = p.b();
  const cplx al = a.alpha;
  const cplx alc = std::conj(al);
  const bool in_left = x < -b || (x == -b && left_limit);
  const bool in_right = x > b || (x == b && !left_limit);
  if (in_left) {
    const cplx v = co.t_plus * std::exp(-al * x);
    return {v, -al * v};
  }
  if (in_right) {
    const cplx e1 = std::exp(alc * x);
    const cplx e2 = co.r_minus * std::exp(-alc * x);
    return {e1 + e2, alc * (e1 - e2)};
  }
  const cplx amp = co.t_plus * std::exp(al * b);
  auto inner_left = [&](double xx) {
    const double c = std::cos(k * (xx + b));
    const double s = std::sin(k * (xx + b));
    return Local{amp * (c - al / k * s), amp * (-k * s - al * c)};
  };
  if (x < 0.0 || (x == 0.0 && left_limit)) return inner_left(x);
  const Local at0 = inner_left(0.0);
  const cplx d0_right = at0.d1 + p.Lambda() * at0.psi;
  return free_from_origin(k, at0.psi, d0_right, x);
}

}  // namespace

WavefunctionSample scattering_wavefunction(const WellParams& p, double k, Incidence dir, double x, Side side) {
  const Coefficients co = explicit_coefficients(p, k);
  const AlphaPair a = alpha_pair(p, k);
  auto eval = [&](bool left_limit) {
    return dir == Incidence::LeftToRight ? left_to_right(p, k, co, a, x, left_limit)
                                         : right_to_left(p, k, co, a, x, left_limit);
  };
  const bool kink = x == 0.0 || std::abs(x) == p.b();
  if (!kink || side == Side::Left) {
    const Local l = eval(true);
    return {x, l.psi, l.d1};
  }
  if (side == Side::Right) {
    const Local r = eval(false);
    return {x, r.psi, r.d1};
  }
  const Local l = eval(true);
  const Local r = eval(false);
  return {x, 0.5 * (l.psi + r.psi), 0.5 * (l.d1 + r.d1)};
}

}  // namespace ptwell
