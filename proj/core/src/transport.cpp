#include "ptwell/transport.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ptwell/error.hpp"

namespace ptwell {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double real_potential_sided(const WellParams& p, double x, Side side) {
  const double b = p.b();
  if (std::abs(x) != b) return real_potential(p, x);
  switch (side) {
    case Side::Left:
      return x < 0.0 ? p.v0() : 0.0;
    case Side::Right:
      return x < 0.0 ? 0.0 : p.v0();
    case Side::Mean:
      break;
  }
  return 0.5 * p.v0();
}

// P = k cos kb + α_R sin kb, g = cos kb + (Λ/2k) sin kb.
struct EdgeFactors {
  double P;
  double g;
};

EdgeFactors edge_factors(const BoundState& s) {
  const double k = s.k;
  const double b = s.params.b();
  const double c = std::cos(k * b);
  const double sn = std::sin(k * b);
  return {k * c + s.alpha.alpha_r * sn, c + 0.5 * s.params.Lambda() / k * sn};
}

}  // namespace

double probability_flux(const WavefunctionSample& psi) {
  return units::hbar_over_m * std::imag(std::conj(psi.psi) * psi.dpsi);
}

double bound_flux(const BoundState& s, double x) {
  const EdgeFactors f = edge_factors(s);
  const double b = s.params.b();
  const double ar = s.alpha.alpha_r;
  const double j0 = units::hbar_over_m * s.c1_sq * s.alpha.alpha_i * s.k * f.P * f.g;
  if (x < -b) return j0 * std::exp(2.0 * ar * (x + b));
  if (x > b) return j0 * std::exp(-2.0 * ar * (x - b));
  return j0;
}

double source_term(const WellParams& p, double x, double rho) {
  return units::two_over_hbar * imaginary_potential(p, x) * rho;
}

double source_term(const BoundState& s, double x) { return source_term(s.params, x, bound_density(s, x)); }

double energy_density_1(const BoundState& s, double x) { return s.E * bound_density(s, x); }

EnergyDensity2 energy_density_2(const BoundState& s, double x) {
  const WellParams& p = s.params;
  const double k = s.k;
  const EdgeFactors f = edge_factors(s);
  EnergyDensity2 out;
  out.delta_point_mass = p.Lambda() * s.c1_sq * f.P * f.P;
  if (std::abs(x) < p.b()) {
    const double cx = std::cos(k * x);
    const double sx = std::sin(k * x);
    const double e = -sx + 0.5 * p.Lambda() / k * sgn(x) * cx;
    const double ai = s.alpha.alpha_i;
    out.smooth = s.c1_sq * k * k * (e * e * f.P * f.P + ai * ai * f.g * f.g * cx * cx);
  } else {
    const double ar = s.alpha.alpha_r;
    out.smooth = (2.0 * ar * ar + k * k) * bound_density(s, x);
  }
  return out;
}

double energy_density_2_from_definition(const BoundState& s, double x, Side side) {
  const WavefunctionSample w = bound_wavefunction(s, x, side);
  return units::hbar2_over_2m * std::norm(w.dpsi) + real_potential_sided(s.params, x, side) * std::norm(w.psi);
}

double energy_flux(const BoundState& s, double x) { return s.E * bound_flux(s, x); }

EnergyFluxes energy_flux_from_definition(const BoundState& s, double x) {
  const WavefunctionJet j = bound_wavefunction_jet(s, x, Side::Mean);
  const cplx V(real_potential(s.params, x), imaginary_potential(s.params, x));
  const cplx Hpsi = -j.d2 + V * j.psi;
  const cplx dHpsi = -j.d3 + V * j.d1;
  EnergyFluxes out;
  out.J1 = std::imag(std::conj(j.psi) * dHpsi) + std::imag(j.d1 * std::conj(Hpsi));
  out.J2 = 2.0 * std::imag(j.d1 * std::conj(Hpsi));
  return out;
}

double energy_source_term(const BoundState& s, double x) { return s.E * source_term(s, x); }

double scattering_flux(const WellParams& p, double k, Incidence dir, double x) {
  const double b = p.b();
  if (std::abs(x) < b) return probability_flux(scattering_wavefunction(p, k, dir, x));
  const Coefficients c = explicit_coefficients(p, k);
  const AlphaPair a = alpha_pair(p, k);
  const double ar = a.alpha_r;
  const double ai = a.alpha.imag();
  const double pref = units::hbar_over_m;
  const cplx phase = std::exp(cplx(0.0, -2.0 * ai * x));
  if (dir == Incidence::LeftToRight) {
    if (x <= -b) {
      return pref * (ai * (std::exp(2.0 * ar * x) - std::norm(c.r_plus) * std::exp(-2.0 * ar * x)) -
                     2.0 * ar * std::imag(c.r_plus * phase));
    }
    return pref * std::norm(c.t_minus) * ai * std::exp(-2.0 * ar * x);
  }
  if (x <= -b) return -pref * ai * std::norm(c.t_plus) * std::exp(-2.0 * ar * x);
  return pref * (ai * (std::norm(c.r_minus) * std::exp(-2.0 * ar * x) - std::exp(2.0 * ar * x)) -
                 2.0 * ar * std::imag(c.r_minus * std::conj(phase)));
}

FluxUnitarity flux_unitarity(const WellParams& p, double k) {
  const AlphaPair a = alpha_pair(p, k);
  const double ai = a.alpha.imag();
  if (ai == 0.0) throw SingularParameter("no propagating leads (alpha_I = 0)");
  const double b = p.b();
  const ScatterData d = scattering_coefficients(p, k);
  FluxUnitarity out;
  const double incident = units::hbar_over_m * ai * std::exp(-2.0 * a.alpha_r * b);
  out.transmission_from_flux = scattering_flux(p, k, Incidence::LeftToRight, -b) / incident;
  out.sign_used = unitarity_sign(out.transmission_from_flux);
  out.residual = std::abs(out.transmission_from_flux + out.sign_used * std::abs(d.r_plus * d.r_minus) - 1.0);
  out.algebraic_residual = d.unitarity_residual;
  return out;
}

double unitarity_from_flux(const WellParams& p, double k) { return flux_unitarity(p, k).residual; }

TransportProfile transport_profile(const BoundState& s, const std::vector<double>& grid, int jobs) {
  TransportProfile tp;
  const std::size_t n = grid.size();
  tp.grid = grid;
  for (auto* v : {&tp.rho_d, &tp.J_d, &tp.Q_d, &tp.rho_E1, &tp.rho_E2, &tp.J_E, &tp.Q_E}) v->resize(n);
  tp.c1_sq = s.c1_sq;
  tp.delta_point_mass = energy_density_2(s, 0.0).delta_point_mass;

  auto fill = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double x = grid[i];
      tp.rho_d[i] = bound_density(s, x);
      tp.J_d[i] = bound_flux(s, x);
      tp.Q_d[i] = source_term(s.params, x, tp.rho_d[i]);
      tp.rho_E1[i] = s.E * tp.rho_d[i];
      tp.rho_E2[i] = energy_density_2(s, x).smooth;
      tp.J_E[i] = s.E * tp.J_d[i];
      tp.Q_E[i] = s.E * tp.Q_d[i];
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), 1, std::max<std::size_t>(1, n / 256));
  if (workers == 1) {
    fill(0, n);
    return tp;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back(fill, lo, hi);
  }
  for (auto& t : pool) t.join();
  return tp;
}

std::vector<double> uniform_grid(double x_max, int n) {
  if (n < 2) throw InvalidParameter("grid needs at least two points");
  if (!(x_max > 0.0)) throw InvalidParameter("grid half-width must be positive");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = -x_max + 2.0 * x_max * i / (n - 1);
  return g;
}

}  // namespace ptwell
