#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptwell/well.hpp"

namespace ptwell {

/// Absolute tolerance for merging near-identical roots.
inline constexpr double kDedupTol = 1e-8;
/// |Im k| at or below which a root counts as real.
inline constexpr double kImagTol = 1e-10;

/// Secular (bound-state) function
///   f(k) = (k² + αα̃)Λ + (2k²(α+α̃) + (k² − αα̃)Λ) cos 2kb
///          + k (2(αα̃ − k²) + (α+α̃)Λ) sin 2kb.
/// Zeros are bound-state pseudo-momenta. f is real on the real axis and
/// satisfies f(conj k) = conj f(k).
cplx secular_residual(const WellParams& p, cplx k);

/// Sum of the magnitudes of the individual terms of f at k; the natural
/// scale for residual tolerances.
double secular_scale(const WellParams& p, cplx k);

/// f and its exact derivatives. f is affine in Λ, f = Λ·A(k) + B(k), so
/// f_Lambda = A and f_kLambda = A'.
struct SecularDerivatives {
  cplx f;
  cplx f_k;
  cplx f_kk;
  cplx f_Lambda;
  cplx f_kLambda;
};
SecularDerivatives secular_derivatives(const WellParams& p, cplx k);

/// Central-difference df/dk with h = 1e-7·(1 + |k|); the continuation corrector
/// uses this.
cplx secular_derivative_fd(const WellParams& p, cplx k);

/// Real-k form of the secular equation, split into the part that survives at
/// v_I = 0 and the coupling proportional to α_I²:
///   hermitian     = (2Λ(k cos kb + α_R sin kb) + 4k(α_R cos kb − k sin kb))
///                   · (k cos kb + α_R sin kb)
///   non_hermitian = 2α_I² sin kb (2k cos kb + Λ sin kb)
struct PtPhaseParts {
  double hermitian = 0.0;
  double non_hermitian = 0.0;
  double total() const { return hermitian + non_hermitian; }
};
PtPhaseParts pt_phase_parts(const WellParams& p, double k);
double pt_phase_residual(const WellParams& p, double k);
/// Throws InvalidParameter when k has a nonzero imaginary part.
double pt_phase_residual(const WellParams& p, cplx k);

/// max(400, 40·k_max·b).
int default_seed_count(const WellParams& p, double k_max);

/// All real roots of the secular equation in (0, k_max], ascending.
///
/// Sign changes of pt_phase_residual on a uniform grid of n_seeds points are
/// bracketed and polished with TOMS 748. Pairs of roots closer than the grid
/// spacing can be missed. n_seeds = 0 selects default_seed_count.
std::vector<double> find_real_roots(const WellParams& p, double k_max, int n_seeds = 0);

/// Distance below which two real roots are treated as merging: 1e-3·π/(2b).
double merge_window(const WellParams& p);

struct BranchSample {
  double Lambda;
  cplx k;
};

struct EPLocation {
  double Lambda_star;
  double k_star;
};

/// One bound-state branch k(Λ) under continuation.
struct SpectralBranch {
  int branch_id = 0;
  std::vector<BranchSample> samples;  // strictly increasing Lambda
  std::optional<EPLocation> ep;
  std::optional<double> chi;  // Λ*·k* when ep is set
  /// Set when a complex branch ended where |Im k²| reaches v_I: the eigenvalue
  /// meets the lead continuum and leaves the normalizable spectrum.
  std::optional<double> continuum_Lambda;

  /// Index of the last sample with |Im k| ≤ kImagTol, or -1.
  int last_real_index() const;
};

struct LambdaRange {
  double start;
  double stop;
};

struct ContinuationOptions {
  int max_iter = 60;
  int max_halvings = 3;
  int grow_after = 5;
  bool detect_ep = true;
};

/// Trace the root k0 (a root at range.start) as Λ increases to range.stop.
///
/// Predictor-corrector: secant predictor, complex Newton corrector on f with
/// a finite-difference derivative. When an exceptional point falls inside
/// the next step the EP is solved for, inserted as a sample, and the branch
/// continues into the complex plane; the lower branch of the pair takes
/// Im k > 0, the upper one Im k < 0. Only v0, vI and b are taken from p.
///
/// Throws ContinuationStall when the corrector fails after max_halvings step
/// halvings.
SpectralBranch continue_branch(const WellParams& p, double k0, LambdaRange range, double step,
                               const ContinuationOptions& opts = {}, int branch_id = 0);

struct DoubleRoot {
  double Lambda_star;
  double k_star;
  double residual;  // max(|f|, (1+|k|)|f_k|) / secular_scale
};

/// Damped Newton on the real system f(k, Λ) = 0, ∂f/∂k(k, Λ) = 0.
/// Throws NoConvergence.
DoubleRoot solve_double_root(const WellParams& p, double k_seed, double Lambda_seed);

struct EPRecord {
  double Lambda_star = 0.0;
  double k_star = 0.0;
  std::pair<int, int> branch_pair{0, 0};
  double residual = 0.0;
  double kappa_bound = 0.0;
};

/// Exceptional point where branches a and b coalesce. The branches must come
/// within merge_window at the top of their common real-Λ range (NotAPair
/// otherwise). Throws NoConvergence if the double-root solve fails.
EPRecord locate_exceptional_point(const WellParams& p, const SpectralBranch& a, const SpectralBranch& b);

/// κ(Λ) = √(v₀² + v_I²)/Λ: for k ≫ √v₀ real roots and EPs lie below it.
/// Throws InvalidParameter for Λ ≤ 0.
double ep_bound_curve(const WellParams& p, double Lambda);

/// Large-k form of the secular equation with Λ = χ/k:
///   sin 2kb = (v₀χ ± √(v_I²(v₀² + v_I² − χ²))) / (v₀² + v_I²).
/// Returns (plus, minus), or nullopt when χ² > v₀² + v_I² (no real solution).
std::optional<std::pair<double, double>> asymptotic_sin2kb(const WellParams& p, double chi);

/// Number of zeros of f (with multiplicity) inside the rectangle
/// [k_lo, k_hi] × [−half_height, half_height] by the argument principle.
/// The rectangle must avoid the branch cuts of α, α̃ and have no zero on its
/// boundary.
int count_zeros_in_box(const WellParams& p, double k_lo, double k_hi, double half_height);

/// All branches starting from the real roots at range.start with k ≤ k_max,
/// traced over range, plus the EPs of every traced pair.
struct Spectrum {
  std::vector<SpectralBranch> branches;
  std::vector<EPRecord> eps;
  std::vector<std::pair<int, std::string>> stalled;  // branch id, reason
};
Spectrum trace_spectrum(const WellParams& p, LambdaRange range, double step, double k_max, int jobs = 1);

}  // namespace ptwell
