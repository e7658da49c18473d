#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "diop/engine.hpp"

namespace diop::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kDiverged = 3,
};

/// Environment variable consulted for the output directory when neither the
/// command line nor the config names one.
inline constexpr const char* kOutputDirEnv = "DIOP_OUTPUT_DIR";

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<int> workers;
};

struct ParetoOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::vector<double>> lambdas;
};

/// Runs every seed on up to `workers` threads. Records come back in seed
/// order and do not depend on the worker count.
[[nodiscard]] std::vector<RunRecord> run_seeds(const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds,
                                               int workers);

/// Output directory precedence: explicit option, config key, environment,
/// then "diop_out".
[[nodiscard]] std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& option,
                                                       const ExperimentConfig& config);

/// Writes trajectory_<seed>.csv per seed and summary.json.
int cmd_run(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& out,
            std::ostream& err);

/// Writes pareto_front.csv.
int cmd_pareto(const std::filesystem::path& config_path, const ParetoOptions& options, std::ostream& out,
               std::ostream& err);

/// Runs the named suite, or all suites when `suite` is empty.
int cmd_verify(const std::optional<std::string>& suite, std::ostream& out, std::ostream& err);

}  // namespace diop::cli
