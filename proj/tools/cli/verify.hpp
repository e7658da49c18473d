#pragma once

#include <string>
#include <vector>

namespace diop::cli {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::vector<std::string> details;
};

/// projection, mixing, estimator, moments, schedule
[[nodiscard]] const std::vector<std::string>& suite_names();

/// Runs one named property suite with fixed seeds. Throws
/// std::invalid_argument for an unknown name.
[[nodiscard]] SuiteResult run_suite(const std::string& name);

}  // namespace diop::cli
