#pragma once

#include <vector>

#include "ptwell/boundstates.hpp"
#include "ptwell/scattering.hpp"
#include "ptwell/well.hpp"

namespace ptwell {

/// J = (ħ/m)·Im(ψ*ψ′) = 2·Im(ψ*ψ′).
double probability_flux(const WavefunctionSample& psi);

/// Closed-form bound-state current. Constant inside the well,
/// J₀ = 2|C₁|² α_I k (k cos kb + α_R sin kb)(cos kb + (Λ/2k) sin kb),
/// with J₀e^{2α_R(x+b)} on the left and J₀e^{−2α_R(x−b)} on the right.
double bound_flux(const BoundState& s, double x);

/// Q_d = 2·V_I(x)·ρ.
double source_term(const WellParams& p, double x, double rho);
double source_term(const BoundState& s, double x);

/// k²·ρ_D(x).
double energy_density_1(const BoundState& s, double x);

struct EnergyDensity2 {
  double smooth = 0.0;            // |ψ′|² + V_R|ψ|² without the δ(x) term
  double delta_point_mass = 0.0;  // coefficient of δ(x)
};

/// Closed-form ρ₂ᴱ. The δ(x) weight is Λ|ψ(0)|².
EnergyDensity2 energy_density_2(const BoundState& s, double x);

/// |ψ′|² + V_R|ψ|² evaluated from the wavefunction (one-sided at kinks).
double energy_density_2_from_definition(const BoundState& s, double x, Side side = Side::Mean);

/// k²·J_d(x).
double energy_flux(const BoundState& s, double x);

struct EnergyFluxes {
  double J1 = 0.0;  // Im(ψ*(Hψ)′) + Im(ψ′(Hψ)*)
  double J2 = 0.0;  // 2·Im(ψ′(Hψ)*)
};

/// Energy fluxes from ψ, ψ′ and Hψ = −ψ″ + Vψ on the piece containing x.
EnergyFluxes energy_flux_from_definition(const BoundState& s, double x);

/// k²·Q_d(x).
double energy_source_term(const BoundState& s, double x);

/// Closed-form lead current of a scattering state with unit incident amplitude.
/// Outside the well the exponential forms are used; inside, the current of the
/// evaluated wavefunction.
double scattering_flux(const WellParams& p, double k, Incidence dir, double x);

struct FluxUnitarity {
  double transmission_from_flux = 0.0;  // J at the source-side edge over the incident normalization
  double residual = 0.0;                // |X + s·|r₊r₋| − 1|
  double algebraic_residual = 0.0;      // unitarity_check of the same point
  int sign_used = 1;
};

/// Generalized unitarity rebuilt from the current at −b.
/// Throws SingularParameter when α_I = 0 (no propagating leads).
FluxUnitarity flux_unitarity(const WellParams& p, double k);

/// Residual of flux_unitarity.
double unitarity_from_flux(const WellParams& p, double k);

struct TransportProfile {
  std::vector<double> grid;
  std::vector<double> rho_d, J_d, Q_d, rho_E1, rho_E2, J_E, Q_E;
  double delta_point_mass = 0.0;
  double c1_sq = 0.0;
};

/// Samples every transport quantity of s on grid (data-parallel over chunks).
TransportProfile transport_profile(const BoundState& s, const std::vector<double>& grid, int jobs = 1);

/// Uniform grid on [−x_max, x_max] with n points.
std::vector<double> uniform_grid(double x_max, int n);

}  // namespace ptwell
