#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "shornoise/report.h"

namespace shornoise {

struct SuiteResult {
  std::string name;
  uint64_t checks = 0;
  std::vector<std::string> failures;
  Json details = Json::object();
  bool passed() const { return failures.empty(); }
};

/// Names accepted by run_suite, in default execution order.
const std::vector<std::string>& suite_names();

/// Throws ConfigError for an unknown suite name.
SuiteResult run_suite(std::string_view name, uint64_t seed);

/// Runs the named suites (all when empty).
std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, uint64_t seed);

Json to_json(const std::vector<SuiteResult>& results, const std::string& run_id);

}  // namespace shornoise
