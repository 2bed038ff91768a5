#include "ptwell/spectrum.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "ptwell/error.hpp"
#include "ptwell/jet.hpp"

namespace ptwell {

namespace {

using J = Jet2<cplx>;

struct SecularParts {
  J A;
  J B;
};

// f = Λ·A(k) + B(k) with
//   A = k² + αα̃ + (k² − αα̃) cos 2kb + k(α+α̃) sin 2kb
//   B = 2k²(α+α̃) cos 2kb + 2k(αα̃ − k²) sin 2kb
SecularParts secular_parts(const WellParams& p, cplx k) {
  const AlphaPair ap = alpha_pair(p, k);
  const J kj = J::variable(k);
  const J k2 = kj * kj;
  const J u = cplx(p.v0(), p.vI()) - k2;
  const J ut = cplx(p.v0(), -p.vI()) - k2;
  const J a = sqrt_with_root(u, ap.alpha);
  const J at = sqrt_with_root(ut, ap.alpha_tilde);
  const J sum = a + at;
  const J prod = a * at;
  const J arg = kj * cplx(2.0 * p.b());
  const J c2 = cos(arg);
  const J s2 = sin(arg);
  SecularParts out;
  out.A = k2 + prod + (k2 - prod) * c2 + kj * sum * s2;
  out.B = cplx(2.0) * k2 * sum * c2 + cplx(2.0) * kj * (prod - k2) * s2;
  return out;
}

}  // namespace

cplx secular_residual(const WellParams& p, cplx k) {
  const AlphaPair ap = alpha_pair(p, k);
  const cplx sum = ap.alpha + ap.alpha_tilde;
  const cplx prod = ap.alpha * ap.alpha_tilde;
  const cplx k2 = k * k;
  const double L = p.Lambda();
  const cplx c2 = std::cos(2.0 * k * p.b());
  const cplx s2 = std::sin(2.0 * k * p.b());
  return (k2 + prod) * L + (2.0 * k2 * sum + (k2 - prod) * L) * c2 +
         k * (2.0 * (prod - k2) + sum * L) * s2;
}

double secular_scale(const WellParams& p, cplx k) {
  const AlphaPair ap = alpha_pair(p, k);
  const cplx sum = ap.alpha + ap.alpha_tilde;
  const cplx prod = ap.alpha * ap.alpha_tilde;
  const cplx k2 = k * k;
  const double L = p.Lambda();
  const double c2 = std::abs(std::cos(2.0 * k * p.b()));
  const double s2 = std::abs(std::sin(2.0 * k * p.b()));
  const double scale = std::abs(k2 + prod) * L +
                       (2.0 * std::abs(k2 * sum) + std::abs(k2 - prod) * L) * c2 +
                       std::abs(k) * (2.0 * std::abs(prod - k2) + std::abs(sum) * L) * s2;
  return std::max(scale, 1e-300);
}

SecularDerivatives secular_derivatives(const WellParams& p, cplx k) {
  const SecularParts parts = secular_parts(p, k);
  const double L = p.Lambda();
  SecularDerivatives d;
  d.f = L * parts.A.v + parts.B.v;
  d.f_k = L * parts.A.d1 + parts.B.d1;
  d.f_kk = L * parts.A.d2 + parts.B.d2;
  d.f_Lambda = parts.A.v;
  d.f_kLambda = parts.A.d1;
  return d;
}

cplx secular_derivative_fd(const WellParams& p, cplx k) {
  const double h = 1e-7 * (1.0 + std::abs(k));
  return (secular_residual(p, k + h) - secular_residual(p, k - h)) / (2.0 * h);
}

PtPhaseParts pt_phase_parts(const WellParams& p, double k) {
  const AlphaParts a = alpha_parts_real(p, k);
  const double L = p.Lambda();
  const double c = std::cos(k * p.b());
  const double s = std::sin(k * p.b());
  const double even = k * c + a.alpha_r * s;
  PtPhaseParts out;
  out.hermitian = (2.0 * L * even + 4.0 * k * (a.alpha_r * c - k * s)) * even;
  out.non_hermitian = 2.0 * a.alpha_i * a.alpha_i * s * (2.0 * k * c + L * s);
  return out;
}

double pt_phase_residual(const WellParams& p, double k) { return pt_phase_parts(p, k).total(); }

double pt_phase_residual(const WellParams& p, cplx k) {
  if (k.imag() != 0.0) throw InvalidParameter("pt_phase_residual requires real k");
  return pt_phase_residual(p, k.real());
}

int default_seed_count(const WellParams& p, double k_max) {
  return std::max(400, static_cast<int>(std::ceil(40.0 * k_max * p.b())));
}

std::vector<double> find_real_roots(const WellParams& p, double k_max, int n_seeds) {
  if (!(k_max > 0.0)) throw InvalidParameter("k_max must be positive");
  if (n_seeds == 0) n_seeds = default_seed_count(p, k_max);
  if (n_seeds < 2) throw InvalidParameter("n_seeds must be >= 2");

  auto f = [&](double k) { return pt_phase_residual(p, k); };
  std::vector<double> roots;
  const double dk = k_max / n_seeds;
  double k_prev = dk;
  double f_prev = f(k_prev);
  if (f_prev == 0.0) roots.push_back(k_prev);
  for (int i = 2; i <= n_seeds; ++i) {
    const double k = (i == n_seeds) ? k_max : dk * i;
    const double fk = f(k);
    if (fk == 0.0) {
      roots.push_back(k);
    } else if (f_prev != 0.0 && std::signbit(fk) != std::signbit(f_prev)) {
      std::uintmax_t max_iter = 200;
      boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
      const auto [lo, hi] = boost::math::tools::toms748_solve(f, k_prev, k, f_prev, fk, tol, max_iter);
      const double r = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
      roots.push_back(r);
    }
    k_prev = k;
    f_prev = fk;
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (out.empty() || r - out.back() > kDedupTol) out.push_back(r);
  }
  return out;
}

double merge_window(const WellParams& p) { return 1e-3 * std::numbers::pi / (2.0 * p.b()); }

int SpectralBranch::last_real_index() const {
  int idx = -1;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::abs(samples[i].k.imag()) <= kImagTol) idx = static_cast<int>(i);
    else break;
  }
  return idx;
}

DoubleRoot solve_double_root(const WellParams& p, double k_seed, double Lambda_seed) {
  double k = k_seed;
  double L = std::max(Lambda_seed, 0.0);

  auto residual = [&](double kk, double LL, SecularDerivatives* out) {
    const WellParams q = p.with_Lambda(LL);
    const SecularDerivatives d = secular_derivatives(q, kk);
    if (out) *out = d;
    const double s = secular_scale(q, kk);
    return std::max(std::abs(d.f.real()), (1.0 + std::abs(kk)) * std::abs(d.f_k.real())) / s;
  };

  SecularDerivatives d;
  double r = residual(k, L, &d);
  for (int it = 0; it < 100; ++it) {
    const double a11 = d.f_k.real(), a12 = d.f_Lambda.real();
    const double a21 = d.f_kk.real(), a22 = d.f_kLambda.real();
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double r1 = d.f.real(), r2 = d.f_k.real();
    const double dk = (r1 * a22 - a12 * r2) / det;
    const double dL = (a11 * r2 - a21 * r1) / det;

    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      const double kn = k - t * dk;
      const double Ln = L - t * dL;
      if (Ln >= 0.0 && kn > 0.0) {
        SecularDerivatives dn;
        const double rn = residual(kn, Ln, &dn);
        if (rn < r || (t < 1e-6 && rn <= r * (1.0 + 1e-12))) {
          k = kn;
          L = Ln;
          r = rn;
          d = dn;
          moved = true;
          break;
        }
      }
      t *= 0.5;
    }
    const bool tiny = std::abs(dk) <= 1e-14 * (1.0 + std::abs(k)) && std::abs(dL) <= 1e-14 * (1.0 + L);
    if (!moved || tiny || r <= 1e-15) break;
  }
  if (!(r <= 1e-10) || !(L > 0.0)) {
    throw NoConvergence("double-root solve did not converge (residual " + std::to_string(r) + ")");
  }
  return {L, k, r};
}

namespace {

// Linear interpolation of the real part of k on a branch at Λ.
double real_k_at(const SpectralBranch& br, int last_real, double Lambda) {
  const auto& s = br.samples;
  if (Lambda <= s.front().Lambda) return s.front().k.real();
  for (int i = 1; i <= last_real; ++i) {
    if (s[i].Lambda >= Lambda) {
      const double t = (Lambda - s[i - 1].Lambda) / (s[i].Lambda - s[i - 1].Lambda);
      return (1.0 - t) * s[i - 1].k.real() + t * s[i].k.real();
    }
  }
  return s[last_real].k.real();
}

}  // namespace

EPRecord locate_exceptional_point(const WellParams& p, const SpectralBranch& a, const SpectralBranch& b) {
  const int ia = a.last_real_index();
  const int ib = b.last_real_index();
  if (ia < 0 || ib < 0) throw NotAPair("branch has no real samples");
  const double Lu = std::min(a.samples[ia].Lambda, b.samples[ib].Lambda);
  const double ka = real_k_at(a, ia, Lu);
  const double kb = real_k_at(b, ib, Lu);
  if (std::abs(ka - kb) > merge_window(p)) {
    throw NotAPair("branches " + std::to_string(a.branch_id) + " and " + std::to_string(b.branch_id) +
                   " do not approach (gap " + std::to_string(std::abs(ka - kb)) + ")");
  }
  const DoubleRoot dr = solve_double_root(p, 0.5 * (ka + kb), Lu);
  EPRecord rec;
  rec.Lambda_star = dr.Lambda_star;
  rec.k_star = dr.k_star;
  rec.branch_pair = {std::min(a.branch_id, b.branch_id), std::max(a.branch_id, b.branch_id)};
  rec.residual = dr.residual;
  rec.kappa_bound = ep_bound_curve(p, dr.Lambda_star);
  return rec;
}

double ep_bound_curve(const WellParams& p, double Lambda) {
  if (!(Lambda > 0.0)) throw InvalidParameter("ep_bound_curve requires Lambda > 0");
  return std::hypot(p.v0(), p.vI()) / Lambda;
}

std::optional<std::pair<double, double>> asymptotic_sin2kb(const WellParams& p, double chi) {
  const double v0 = p.v0();
  const double vI = p.vI();
  const double n2 = v0 * v0 + vI * vI;
  const double rad = vI * vI * (n2 - chi * chi);
  if (n2 == 0.0 || rad < 0.0) return std::nullopt;
  const double root = std::sqrt(rad);
  return std::make_pair((v0 * chi + root) / n2, (v0 * chi - root) / n2);
}

namespace {

// Phase increment of f along [z0, z1], subdividing until each piece turns by
// less than a quarter turn.
double arg_increment(const WellParams& p, cplx z0, cplx f0, cplx z1, cplx f1, int depth) {
  const double d = std::arg(f1 / f0);
  if (depth < 48 && std::abs(d) > 0.5) {
    const cplx zm = 0.5 * (z0 + z1);
    const cplx fm = secular_residual(p, zm);
    if (fm == cplx(0.0)) throw InvalidParameter("zero of f on the contour");
    return arg_increment(p, z0, f0, zm, fm, depth + 1) + arg_increment(p, zm, fm, z1, f1, depth + 1);
  }
  return d;
}

}  // namespace

int count_zeros_in_box(const WellParams& p, double k_lo, double k_hi, double half_height) {
  if (!(k_hi > k_lo) || !(half_height > 0.0)) throw InvalidParameter("degenerate contour");
  const cplx corners[5] = {{k_lo, -half_height}, {k_hi, -half_height}, {k_hi, half_height},
                           {k_lo, half_height}, {k_lo, -half_height}};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const int n = 256;
    cplx z0 = corners[e];
    cplx f0 = secular_residual(p, z0);
    for (int i = 1; i <= n; ++i) {
      const cplx z1 = corners[e] + (corners[e + 1] - corners[e]) * (static_cast<double>(i) / n);
      const cplx f1 = secular_residual(p, z1);
      if (f1 == cplx(0.0) || f0 == cplx(0.0)) throw InvalidParameter("zero of f on the contour");
      total += arg_increment(p, z0, f0, z1, f1, 0);
      z0 = z1;
      f0 = f1;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace ptwell
