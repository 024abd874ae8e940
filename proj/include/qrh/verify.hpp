#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qrh {

struct SuiteOptions {
  std::uint64_t seed = 42;
  int samples = 0;              // 0: the suite's default
  std::optional<double> tol;    // overrides the tolerance of the suite's first check
  unsigned threads = 0;         // 0: hardware concurrency
};

struct CheckResult {
  std::string name;
  double max = 0;         // worst value over the samples
  double tol = 0;         // passes when max < tol (max ≤ tol for bounds)
  bool pass = false;
  bool diagnostic = false;  // reported, not part of the verdict
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int samples = 0;
  double max_abs_residual = 0;
  double max_rel_residual = 0;
  int excluded_near_pole = 0;
  bool pass = false;
  std::vector<CheckResult> checks;
  std::string note;
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
int default_samples(const std::string& suite);

// Throws Error(invalid_argument) for an unknown suite.
SuiteReport run_suite(const std::string& suite, const SuiteOptions& opt = {});

nlohmann::json to_json(const SuiteReport& r);

}  // namespace qrh
