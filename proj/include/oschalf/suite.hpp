#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oschalf/report.hpp"

namespace oschalf {

inline constexpr int kCriterionCount = 10;

struct SuiteOptions {
  int dim = 2;
  std::uint64_t seed = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  Json detail;
  /// One line: "PASS [n] name: ..." or "FAIL [n] name: ...".
  std::string summary;
};

std::string criterion_name(int id);

/// Runs one acceptance criterion (1..10). Throws std::invalid_argument for
/// an unknown id or an unsupported dimension.
CriterionResult run_criterion(int id, const SuiteOptions& options = {});

std::vector<CriterionResult> run_suite(const SuiteOptions& options = {});

/// Shared fixtures, exposed for the command front end.
std::vector<double> default_scan_scales();
std::vector<double> default_fit_eps();
ScanReport default_scan(int dim);

}  // namespace oschalf
