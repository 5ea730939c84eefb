// The acceptance suite: one runnable check per acceptance criterion, each
// with its tolerance pinned in code. The CLI `suite` command and the ctest
// acceptance binary both run exactly this.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace munorm {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string eq_tags;
  bool pass = false;
  std::string details;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  /// When set, every criterion tolerance becomes min(stated, override).
  std::optional<double> tol_override;
};

/// Criteria 1-12 (the computational ones), in order.
std::vector<CriterionResult> run_acceptance_criteria(const SuiteOptions& options);

/// Criterion 13: regenerates the full 1-12 report with the same seed and
/// byte-compares the two renderings. When `first_report` is given it is used
/// as the baseline instead of a fresh third run.
CriterionResult run_determinism_criterion(const SuiteOptions& options,
                                          const std::string* first_report = nullptr);

/// One line per criterion plus a final SUITE PASS/FAIL line.
std::string format_suite_report(const std::vector<CriterionResult>& results);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace munorm
