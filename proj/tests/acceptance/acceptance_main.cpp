#include <cstdio>
#include <string>

#include "ptwell/validation.hpp"

// Runs the full validation suite and prints one PASS/FAIL line per
// acceptance criterion, followed by the supporting invariant checks.
int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  ptwell::ValidationOptions opts;
  opts.level = ptwell::ValidationLevel::Full;
  const auto results = ptwell::run_validation(opts);

  int failed = 0;
  std::printf("== acceptance criteria ==\n");
  for (const auto& r : results) {
    if (r.criterion == 0) continue;
    std::printf("%s\n", ptwell::format_result(r).c_str());
    failed += !r.passed;
  }
  std::printf("== supporting invariants ==\n");
  for (const auto& r : results) {
    if (r.criterion != 0) continue;
    std::printf("%s\n", ptwell::format_result(r).c_str());
    failed += !r.passed;
  }
  std::printf("%s (%d failing)\n", failed == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", failed);
  return failed == 0 ? 0 : 1;
}
