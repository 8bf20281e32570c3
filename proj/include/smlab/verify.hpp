#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace smlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 14;

/// Runs acceptance criterion `id` (1..14). `fast` shrinks replica counts
/// and grids for smoke runs; the thresholds themselves never change.
CriterionResult run_criterion(int id, bool fast = false);

/// Suites: means, variance, rains, bernoulli, transport, concentration,
/// coupling, lipschitz, all.
std::vector<std::string> suite_names();
std::vector<int> suite_criteria(std::string_view suite);
std::vector<CriterionResult> run_suite(std::string_view suite, bool fast = false);

/// "PASS  3  variance bound  (12.3 s)  detail"
std::string format_criterion(const CriterionResult& r);

}  // namespace smlab
