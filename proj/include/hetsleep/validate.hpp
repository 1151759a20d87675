#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hetsleep/scenario.hpp"

namespace hetsleep {

struct ValidateOptions {
  std::uint64_t seed = 1;
  long mc_trials = 100000;
  long load_realizations = 500;
  long pilot_realizations = 200;
  double budget_s = 1800.0;
  unsigned threads = 0;
  std::vector<int> only;  // criterion ids; empty runs all
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  bool skipped = false;  // not run (budget)
  std::string detail;
  double seconds = 0.0;
};

struct ValidateReport {
  std::vector<CriterionResult> results;
  bool budget_exceeded = false;
  double seconds = 0.0;

  bool all_pass() const;
};

/// Runs the acceptance checks on s (expected: the two-tier reference
/// scenario). on_result is called as each check finishes.
ValidateReport run_validation(const Scenario& s, const ValidateOptions& opt,
                              const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

}  // namespace hetsleep
