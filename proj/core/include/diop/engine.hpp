#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "diop/interval.hpp"
#include "diop/network.hpp"
#include "diop/problems.hpp"
#include "diop/types.hpp"
#include "diop/zeroth_order.hpp"

namespace diop {

struct AgentState {
  Point x;
  double lambda = 0.0;
};

/// Minimizer of sum_i f_i(x, lambda_star) over the constraint set.
struct ReferenceSolution {
  double lambda_star = 0.5;
  Point x_star;
  double f_star = 0.0;
};

struct RunConfig {
  IntervalProblem problem;
  GraphSchedule schedule;
  StepSchedule steps;
  PerturbationDist dist = PerturbationDist::rademacher();
  std::size_t iterations = 0;
  std::vector<double> lambda0;
  std::vector<Point> x0;
  std::uint64_t seed = 0;
  /// Reference for the gap metrics; computed from mean(lambda0) when empty.
  std::optional<ReferenceSolution> reference;
};

struct IterationMetrics {
  double consensus_error = 0.0;  ///< max_i ||x_i - mean x||
  double lambda_spread = 0.0;    ///< max_i |lambda_i - mean lambda|
  double optimality_gap = 0.0;   ///< ||mean x - x_star||
  double objective_gap = 0.0;    ///< sum_i f_i(x_i, lambda_i) - f_star
  double regret_running = 0.0;   ///< mean of objective_gap over iterations 1..k; 0 at k = 0
};

struct RunRecord {
  std::uint64_t seed = 0;
  ReferenceSolution reference;
  std::vector<std::vector<AgentState>> trajectory;  ///< iterations + 1 snapshots
  std::vector<IterationMetrics> metrics;             ///< one per snapshot

  [[nodiscard]] std::size_t iterations() const noexcept { return trajectory.empty() ? 0 : trajectory.size() - 1; }
  [[nodiscard]] Point mean_x(std::size_t k) const;
  [[nodiscard]] double mean_lambda(std::size_t k) const;
};

/// Throws InvalidArgument naming the first broken RunConfig invariant.
void validate(const RunConfig& config);

/// Synchronous distributed zeroth-order iteration. For k = 0 .. T-1 every
/// agent averages neighbour states with W(k), takes a randomized-difference
/// step from the averaged point with its own lambda, projects onto the
/// constraint set, and averages lambda with the same W(k).
///
/// Throws InvalidArgument on an invalid config or a schedule that is not
/// jointly connected, and DivergenceError (carrying k) on a non-finite or
/// runaway iterate.
[[nodiscard]] RunRecord run(const RunConfig& config);

/// Projected descent with central-difference gradients and backtracking,
/// then a dyadic lattice search for p <= 2. Deterministic.
/// Throws InvalidArgument unless 0 < lambda_star < 1.
[[nodiscard]] ReferenceSolution reference_solve(const IntervalProblem& problem, double lambda_star);

/// (1/T) sum_{k=1..T} [sum_i f_i(x_i(k), lambda_i(k)) - sum_i f_i(x*, lambda*)]
/// for T = record.iterations(). Throws InvalidArgument when T < 1.
[[nodiscard]] double regret(const RunRecord& record, const ReferenceSolution& ref, const IntervalProblem& problem);

/// regret for every prefix: element t-1 holds R(t), t = 1..T.
[[nodiscard]] std::vector<double> regret_curve(const RunRecord& record, const ReferenceSolution& ref,
                                               const IntervalProblem& problem);

struct ParetoPoint {
  double lambda = 0.0;
  Point x_star;
  double f_star = 0.0;
  Interval aggregate{0.0, 0.0};  ///< sum_i G_i(x_star)
  bool pareto_optimal = false;   ///< non-dominated within the sweep's pool
};

/// Solves the scalarized problem at each weight and checks every aggregate
/// interval for non-dominance against the pooled results. Weights must lie
/// strictly inside (0, 1) and the grid must be non-empty.
[[nodiscard]] std::vector<ParetoPoint> pareto_sweep(const IntervalProblem& problem, std::span<const double> lambdas);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points_used = 0;
  std::size_t excluded_nonpositive = 0;
};

/// Least-squares slope of log R against log T over the second half of the
/// curve. Needs >= 10 points; non-positive R values are skipped and counted.
[[nodiscard]] RateFit rate_fit(std::span<const std::pair<double, double>> curve);

}  // namespace diop
