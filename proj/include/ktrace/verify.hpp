#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ktrace {

// Knobs shared by all property suites. Zero means "use the suite default";
// tol is a multiplier applied to every pass threshold of the suite.
struct SuiteConfig {
  std::uint64_t seed = 2026;
  int instances = 0;
  int n = 0;
  int k = 0;
  double tol = 0.0;
  int samples = 0;  // Monte-Carlo suites only
};

// One monitored quantity; the suite passes when worst <= limit for every row.
// Rows are phrased so that larger always means worse.
struct CheckRow {
  std::string label;
  double worst = 0.0;
  double limit = 0.0;
  bool passed = false;
};

struct SuiteResult {
  std::string name;
  std::uint64_t seed = 0;
  int instances = 0;
  bool passed = false;
  double elapsed_seconds = 0.0;
  std::vector<CheckRow> rows;
  std::vector<std::string> failures;  // per-instance descriptions
};

const std::vector<std::string>& suite_names();

// Throws ArgumentError for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteConfig& config);

std::vector<SuiteResult> run_all_suites(const SuiteConfig& config);

}  // namespace ktrace
