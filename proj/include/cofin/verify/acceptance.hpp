#pragma once

// The property suite behind the acceptance binary and `cofwb verify`.  Each
// criterion builds its own seeded instances, checks them against the slow
// oracles, and reports counts plus its wall time.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cofin/core.hpp"

namespace cofin::verify {

struct SuiteConfig {
  std::uint64_t seed = 1;
  // criterion 3 builds; the other criteria pin their own windows
  Nat build_window = 256;
  std::size_t build_stages = 20;
  Nat sub_window = 12;
  std::size_t sample_budget = 200;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool checks_pass = false;
  double seconds = 0;
  double limit_seconds = 0;
  std::map<std::string, double> metrics;
  std::vector<std::string> failures;  // first few, for the report
  bool pass() const { return checks_pass && seconds < limit_seconds; }
};

inline constexpr int kCriteria = 11;

CriterionResult run_criterion(int id, const SuiteConfig& cfg);
std::vector<CriterionResult> run_suite(const SuiteConfig& cfg, const std::vector<int>& ids = {});

}  // namespace cofin::verify
