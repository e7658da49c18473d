#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "diop/engine.hpp"

namespace diop::cli {

/// Shortest-form-free, locale-independent rendering with 17 significant
/// digits, so every double read back parses to the same bits.
[[nodiscard]] std::string format_real(double v);

/// Columns: iter, agent, x_0..x_{p-1}, lambda, consensus_err, regret_running;
/// one row per (iteration, agent), iterations 0..T.
void write_trajectory_csv(std::ostream& out, const RunRecord& record);

/// Columns: lambda, x_star_0..x_star_{p-1}, G_lo, G_hi, pareto_flag.
void write_pareto_csv(std::ostream& out, std::span<const ParetoPoint> front);

struct SeedSummary {
  std::uint64_t seed = 0;
  std::vector<Point> x_final;
  std::vector<double> lambda_final;
  Point mean_x;
  double consensus_error = 0.0;
  double consensus_error_early = 0.0;  ///< at iteration ceil(T/10)
  double regret = 0.0;                 ///< R(T); 0 when T = 0
  double regret_early = 0.0;           ///< R(ceil(T/10))
};

/// Thresholds behind the summary flags.
struct CheckThresholds {
  double lambda_consensus = 1e-6;
  double feasibility = 1e-9;
  double consensus_error = 0.05;
  double reference_distance = 0.1;
};

struct SummaryReport {
  std::string problem;
  std::string schedule;
  std::size_t iterations = 0;
  std::size_t agents = 0;
  int dim = 1;
  double lambda0_mean = 0.0;
  ReferenceSolution reference;
  std::vector<SeedSummary> seeds;
  Point mean_x;                        ///< seed mean of the network mean at T
  double mean_lambda = 0.0;            ///< seed mean of the network mean lambda at T
  double consensus_error = 0.0;        ///< seed mean
  double consensus_error_early = 0.0;  ///< seed mean
  double regret = 0.0;                 ///< seed mean of R(T)
  double regret_early = 0.0;           ///< seed mean of R(ceil(T/10))
  std::optional<double> rate_slope;    ///< log-log slope of the seed-mean regret curve, T >= 10
  std::vector<std::pair<std::string, bool>> checks;
};

[[nodiscard]] SummaryReport summarize(const std::string& problem, const std::string& schedule,
                                      const IntervalProblem& instance, std::span<const RunRecord> records,
                                      const CheckThresholds& thresholds = {});

[[nodiscard]] nlohmann::json to_json(const SummaryReport& report);

}  // namespace diop::cli
