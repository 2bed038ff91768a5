#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>

#include "ptwell/error.hpp"
#include "ptwell/spectrum.hpp"

namespace ptwell {

namespace {

struct Corrected {
  bool ok = false;
  cplx k;
};

Corrected newton(const WellParams& p, cplx seed, bool keep_real, int max_iter) {
  cplx k = seed;
  for (int it = 0; it < max_iter; ++it) {
    const cplx f = secular_residual(p, k);
    const cplx df = secular_derivative_fd(p, k);
    if (df == cplx(0.0) || !std::isfinite(std::abs(df)) || !std::isfinite(std::abs(f))) return {};
    cplx dk = f / df;
    if (keep_real) dk = dk.real();
    k -= dk;
    if (!std::isfinite(std::abs(k))) return {};
    if (std::abs(dk) <= 1e-13 * (1.0 + std::abs(k))) {
      const double res = std::abs(secular_residual(p, k)) / secular_scale(p, k);
      if (res <= 1e-10) return {true, k};
      return {};
    }
  }
  return {};
}

double real_slope(const WellParams& p, double k) { return secular_derivatives(p, k).f_k.real(); }

enum class Phase { Real, Complex };

class BranchTracer {
 public:
  BranchTracer(const WellParams& p, LambdaRange range, double step, const ContinuationOptions& opts)
      : p_(p), range_(range), step_(step), opts_(opts) {}

  SpectralBranch run(double k0, int branch_id) {
    SpectralBranch br;
    br.branch_id = branch_id;

    const WellParams p0 = p_.with_Lambda(range_.start);
    const Corrected c0 = newton(p0, k0, false, opts_.max_iter);
    if (!c0.ok) throw ContinuationStall("initial point is not a root (k0 = " + std::to_string(k0) + ")");
    cplx k = c0.k;
    if (std::abs(k.imag()) <= kImagTol) k = k.real();
    br.samples.push_back({range_.start, k});
    if (range_.stop <= range_.start) return br;

    const bool ep_enabled = opts_.detect_ep && range_.stop > 0.0;
    Phase phase = std::abs(k.imag()) <= kImagTol ? Phase::Real : Phase::Complex;
    double slope_sign = phase == Phase::Real ? std::copysign(1.0, real_slope(p0, k.real())) : 0.0;

    double L = range_.start;
    double h = step_;
    int successes = 0;
    int halvings = 0;
    const double span = range_.stop - range_.start;

    while (L < range_.stop - 1e-14 * std::max(1.0, span)) {
      const double h_try = std::min(h, range_.stop - L);
      const double L_new = L + h_try;

      if (phase == Phase::Real && ep_enabled) {
        if (auto ep = look_ahead(L, k.real(), h_try)) {
          enter_complex(br, *ep, k.real());
          phase = Phase::Complex;
          L = ep->Lambda_star;
          halvings = 0;
          continue;
        }
      }

      const cplx pred = predict(br, L_new);
      const WellParams q = p_.with_Lambda(L_new);
      Corrected c = newton(q, pred, phase == Phase::Real, opts_.max_iter);
      if (c.ok) c.ok = accept(q, phase, c.k, pred, slope_sign);

      if (!c.ok) {
        if (++halvings > opts_.max_halvings) {
          if (phase == Phase::Real && ep_enabled) {
            if (auto ep = fallback_ep(L, k.real(), h_try)) {
              enter_complex(br, *ep, k.real());
              phase = Phase::Complex;
              L = ep->Lambda_star;
              halvings = 0;
              continue;
            }
          }
          if (phase == Phase::Complex && near_continuum(k)) {
            br.continuum_Lambda = L;
            return br;
          }
          throw ContinuationStall("branch " + std::to_string(branch_id) + " stalled at Lambda = " +
                                  std::to_string(L));
        }
        h *= 0.5;
        successes = 0;
        continue;
      }

      k = c.k;
      if (phase == Phase::Real) k = k.real();
      br.samples.push_back({L_new, k});
      L = L_new;
      halvings = 0;
      if (++successes >= opts_.grow_after) {
        h = std::min(2.0 * h, step_);
        successes = 0;
      }
    }
    return br;
  }

 private:
  // Quadratic model around (k, Λ): f ≈ f_Λ ε + f_k δ + f_kk δ²/2. Its fold
  // sits at ε* = f_k² / (2 f_kk f_Λ), with the partner root at δ = −2f_k/f_kk.
  std::optional<DoubleRoot> look_ahead(double L, double k, double h_try) const {
    const WellParams q = p_.with_Lambda(L);
    const SecularDerivatives d = secular_derivatives(q, k);
    const double fk = d.f_k.real(), fkk = d.f_kk.real(), fL = d.f_Lambda.real();
    if (fkk == 0.0 || fL == 0.0) return std::nullopt;
    const double eps_star = fk * fk / (2.0 * fkk * fL);
    const double partner = -2.0 * fk / fkk;
    const double coarse = 0.5 * std::numbers::pi / (2.0 * p_.b());
    if (!(eps_star > 0.0) || eps_star > 2.0 * h_try || std::abs(partner) > coarse) return std::nullopt;
    return try_ep(L, k, partner, eps_star, h_try);
  }

  std::optional<DoubleRoot> fallback_ep(double L, double k, double h_try) const {
    const WellParams q = p_.with_Lambda(L);
    const SecularDerivatives d = secular_derivatives(q, k);
    const double fk = d.f_k.real(), fkk = d.f_kk.real(), fL = d.f_Lambda.real();
    if (fkk == 0.0) return std::nullopt;
    const double partner = -2.0 * fk / fkk;
    double eps_star = fL != 0.0 ? fk * fk / (2.0 * fkk * fL) : 0.0;
    if (!(eps_star > 0.0)) eps_star = 0.5 * h_try;
    return try_ep(L, k, partner, eps_star, h_try);
  }

  std::optional<DoubleRoot> try_ep(double L, double k, double partner, double eps_star, double h_try) const {
    DoubleRoot dr;
    try {
      dr = solve_double_root(p_, k + 0.5 * partner, L + eps_star);
    } catch (const NoConvergence&) {
      return std::nullopt;
    }
    if (!(dr.Lambda_star > L) || dr.Lambda_star > L + h_try) return std::nullopt;
    if (std::abs(dr.k_star - k) > 1.5 * std::abs(partner) + 1e-9 * (1.0 + k)) return std::nullopt;
    return dr;
  }

  void enter_complex(SpectralBranch& br, const DoubleRoot& ep, double k_before) {
    br.samples.push_back({ep.Lambda_star, ep.k_star});
    br.ep = EPLocation{ep.Lambda_star, ep.k_star};
    br.chi = ep.Lambda_star * ep.k_star;
    imag_sign_ = k_before < ep.k_star ? 1.0 : -1.0;
    const SecularDerivatives d = secular_derivatives(p_.with_Lambda(ep.Lambda_star), ep.k_star);
    ep_curvature_ = 2.0 * d.f_Lambda.real() / d.f_kk.real();
    ep_index_ = br.samples.size() - 1;
  }

  cplx predict(const SpectralBranch& br, double L_new) const {
    const auto& s = br.samples;
    const std::size_t n = s.size();
    if (ep_index_ && *ep_index_ == n - 1) {
      // Just past the EP: k ≈ k* ± i √(2 f_Λ ε / f_kk).
      const double eps = L_new - s.back().Lambda;
      return s.back().k + cplx(0.0, imag_sign_ * std::sqrt(std::abs(ep_curvature_) * eps));
    }
    if (ep_index_ && *ep_index_ == n - 2) {
      const double e1 = s.back().Lambda - s[n - 2].Lambda;
      const double e2 = L_new - s[n - 2].Lambda;
      return s[n - 2].k + (s.back().k - s[n - 2].k) * std::sqrt(e2 / e1);
    }
    if (n < 2) return s.back().k;
    const double t = (L_new - s[n - 1].Lambda) / (s[n - 1].Lambda - s[n - 2].Lambda);
    return s[n - 1].k + t * (s[n - 1].k - s[n - 2].k);
  }

  bool near_continuum(cplx k) const { return std::abs((k * k).imag()) > 0.9 * p_.vI(); }

  bool accept(const WellParams& q, Phase phase, cplx k, cplx pred, double slope_sign) const {
    if (phase == Phase::Complex && std::abs((pred * pred).imag()) >= p_.vI()) return false;
    const double jump = 0.25 * std::numbers::pi / (2.0 * p_.b());
    if (std::abs(k - pred) > jump) return false;
    if (phase == Phase::Real) {
      if (k.real() <= 0.0) return false;
      // Neighbouring simple roots of a real function have opposite slopes,
      // so a slope flip means the corrector landed on the partner branch.
      return std::copysign(1.0, real_slope(q, k.real())) == slope_sign;
    }
    return imag_sign_ * k.imag() > kImagTol;
  }

  WellParams p_;
  LambdaRange range_;
  double step_;
  ContinuationOptions opts_;
  double imag_sign_ = 0.0;
  double ep_curvature_ = 0.0;
  std::optional<std::size_t> ep_index_;
};

}  // namespace

SpectralBranch continue_branch(const WellParams& p, double k0, LambdaRange range, double step,
                               const ContinuationOptions& opts, int branch_id) {
  if (!(step > 0.0)) throw InvalidParameter("continuation step must be positive");
  if (range.stop < range.start) throw InvalidParameter("Lambda range must be increasing");
  if (range.start < 0.0) throw InvalidParameter("Lambda must be >= 0");
  BranchTracer tracer(p, range, step, opts);
  return tracer.run(k0, branch_id);
}

Spectrum trace_spectrum(const WellParams& p, LambdaRange range, double step, double k_max, int jobs) {
  const std::vector<double> roots = find_real_roots(p.with_Lambda(range.start), k_max);
  Spectrum out;
  out.branches.resize(roots.size());
  std::vector<std::string> errors(roots.size());

  auto work = [&](std::size_t i) {
    try {
      out.branches[i] = continue_branch(p, roots[i], range, step, {}, static_cast<int>(i) + 1);
    } catch (const Error& e) {
      errors[i] = e.what();
      out.branches[i].branch_id = static_cast<int>(i) + 1;
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1 || roots.size() < 2) {
    for (std::size_t i = 0; i < roots.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < roots.size(); i = next++) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (!errors[i].empty()) out.stalled.emplace_back(static_cast<int>(i) + 1, errors[i]);
  }

  // Pair branches whose recorded EPs coincide.
  const double tol = 1e-6;
  std::vector<bool> used(out.branches.size(), false);
  for (std::size_t i = 0; i < out.branches.size(); ++i) {
    const auto& a = out.branches[i];
    if (used[i] || !a.ep || !errors[i].empty()) continue;
    for (std::size_t j = i + 1; j < out.branches.size(); ++j) {
      const auto& b = out.branches[j];
      if (used[j] || !b.ep || !errors[j].empty()) continue;
      if (std::abs(a.ep->Lambda_star - b.ep->Lambda_star) <= tol * (1.0 + a.ep->Lambda_star) &&
          std::abs(a.ep->k_star - b.ep->k_star) <= tol * (1.0 + a.ep->k_star)) {
        try {
          out.eps.push_back(locate_exceptional_point(p, a, b));
          used[i] = used[j] = true;
        } catch (const Error& e) {
          out.stalled.emplace_back(a.branch_id, e.what());
        }
        break;
      }
    }
  }
  std::sort(out.eps.begin(), out.eps.end(),
            [](const EPRecord& x, const EPRecord& y) { return x.k_star < y.k_star; });
  return out;
}

}  // namespace ptwell
