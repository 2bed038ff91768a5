#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ptwell/well.hpp"

namespace ptwell {

enum class ValidationLevel { Quick, Full };

/// One check of the validation suite. criterion is 1..12 for the acceptance
/// criteria and 0 for the supporting invariant checks.
struct CheckResult {
  int criterion = 0;
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
  bool skipped = false;
};

struct ValidationOptions {
  ValidationLevel level = ValidationLevel::Full;
  int jobs = 1;
  /// Called after every finished check.
  std::function<void(const CheckResult&)> on_result;
};

CheckResult check_oracle_spectrum(const ValidationOptions& o);     // 1
CheckResult check_no_breaking_at_zero(const ValidationOptions& o);  // 2
CheckResult check_exceptional_points(const ValidationOptions& o);   // 3
CheckResult check_sqrt_scaling(const ValidationOptions& o);         // 4
CheckResult check_normalization(const ValidationOptions& o);        // 5
CheckResult check_generalized_unitarity(const ValidationOptions& o);  // 6
CheckResult check_reflection_zeros(const ValidationOptions& o);     // 7
CheckResult check_transfer_identities(const ValidationOptions& o);  // 8
CheckResult check_bound_transport(const ValidationOptions& o);      // 9
CheckResult check_scattering_flux(const ValidationOptions& o);      // 10
CheckResult check_monotonicity(const ValidationOptions& o);         // 11

/// Parameter-generic invariants for one configuration: scattering identities
/// on a k grid in (0, k_max] and normalization, r₊ zeros and flux constancy
/// for every bound state below k_max.
CheckResult check_parameter_set(const WellParams& p, double k_max);

/// Invariant checks that back the criteria (alpha branch, dual-path
/// coefficients, symmetries, oracle eigenvectors, h-refinement, ...).
std::vector<CheckResult> invariant_checks(const ValidationOptions& o);

/// Criteria 1..11, the invariant checks, and finally criterion 12 (wall time
/// of the whole run ≤ 600 s). Oracle eigensolves are skipped at Quick level.
std::vector<CheckResult> run_validation(const ValidationOptions& o);

/// Human-readable one-line summary of a check.
std::string format_result(const CheckResult& r);

}  // namespace ptwell
