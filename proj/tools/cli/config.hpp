#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "diop/engine.hpp"

namespace diop::cli {

/// Config file rejected; the message names the violated invariant.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed and validated experiment description.
///
/// Everything downstream (problem, schedule, step sizes, initial data) is
/// constructed during parsing, so a successfully parsed config can be run
/// without further checks.
struct ExperimentConfig {
  std::string problem_preset;
  IntervalProblem problem;
  std::string schedule_name;
  GraphSchedule schedule;
  StepSchedule steps;
  PerturbationDist dist = PerturbationDist::rademacher();
  std::size_t iterations = 0;
  std::vector<std::uint64_t> seeds{};
  std::vector<double> lambda0{};
  std::vector<Point> x0{};
  std::optional<double> lambda_star{};
  std::vector<double> pareto_lambdas{};
  std::optional<std::filesystem::path> output_dir{};
  int workers = 1;

  [[nodiscard]] RunConfig run_config(std::uint64_t seed) const;
};

/// Throws ConfigError for malformed JSON, unknown keys, or any invariant
/// violation of the objects being built.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// "1,2,5-9" -> {1, 2, 5, 6, 7, 8, 9}
[[nodiscard]] std::vector<std::uint64_t> parse_seed_list(const std::string& text);
/// "0.1,0.5" -> {0.1, 0.5}
[[nodiscard]] std::vector<double> parse_real_list(const std::string& text);

/// Config for the five-agent quadratic experiment (fig2 schedule, epsilon 1/8,
/// delta 1/4, lambda0 = 0.1 .. 0.9, x0 = 0).
[[nodiscard]] nlohmann::json five_agent_config_json(std::size_t iterations, std::vector<std::uint64_t> seeds);

}  // namespace diop::cli
