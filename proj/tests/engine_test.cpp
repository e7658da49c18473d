#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "diop/engine.hpp"

namespace diop {
namespace {

Point p1(double v) { return Point::Constant(1, v); }

RunConfig five_agent_run(std::size_t iterations, std::uint64_t seed) {
  return RunConfig{five_agent_problem(),
                   fig2_schedule(),
                   step_schedule(0.125, 0.25),
                   PerturbationDist::rademacher(),
                   iterations,
                   {0.1, 0.3, 0.5, 0.7, 0.9},
                   std::vector<Point>(5, p1(0.0)),
                   seed,
                   std::nullopt};
}

TEST(RunTest, FiveAgentLambdaConsensus) {
  const RunRecord r = run(five_agent_run(500, 1));
  ASSERT_EQ(r.trajectory.size(), 501u);
  for (const AgentState& a : r.trajectory.back()) EXPECT_NEAR(a.lambda, 0.5, 1e-6);
  EXPECT_NEAR(r.mean_x(500)[0], 1.0, 0.1);
  EXPECT_DOUBLE_EQ(r.reference.lambda_star, 0.5);
  EXPECT_NEAR(r.reference.x_star[0], 1.0, 1e-4);
}

TEST(RunTest, ZeroIterations) {
  const RunRecord r = run(five_agent_run(0, 3));
  ASSERT_EQ(r.trajectory.size(), 1u);
  ASSERT_EQ(r.metrics.size(), 1u);
  EXPECT_EQ(r.metrics[0].regret_running, 0.0);
  EXPECT_EQ(r.trajectory[0][2].lambda, 0.5);
  EXPECT_THROW((void)regret(r, r.reference, five_agent_problem()), InvalidArgument);
}

TEST(RunTest, RejectsInvalidConfigs) {
  RunConfig bad = five_agent_run(10, 0);
  bad.lambda0 = {0.1, 0.2};
  EXPECT_THROW((void)run(bad), InvalidArgument);
  bad = five_agent_run(10, 0);
  bad.lambda0 = {0, 0, 0, 0, 0};
  EXPECT_THROW((void)run(bad), InvalidArgument);
  bad = five_agent_run(10, 0);
  bad.x0[2] = p1(150.0);
  EXPECT_THROW((void)run(bad), InvalidArgument);
  RunConfig disconnected = five_agent_run(10, 0);
  disconnected.schedule = GraphSchedule::unchecked({metropolis_weights(5, {})}, 1);
  EXPECT_THROW((void)run(disconnected), InvalidArgument);
  RunConfig mismatch = five_agent_run(10, 0);
  mismatch.schedule = ring_schedule(4);
  EXPECT_THROW((void)run(mismatch), InvalidArgument);
}

TEST(RunTest, DivergenceGuardReportsIteration) {
  // Jumps between +-1.7e308 so the difference quotient overflows.
  IntervalFn cliff{1, [](const Point& x) {
                     const double v = x[0] > 0.5 ? 1.7e308 : -1.7e308;
                     return Interval(v, v);
                   }};
  IntervalProblem problem({cliff, cliff}, ConstraintSet::box(p1(0), p1(1)));
  RunConfig cfg{problem, ring_schedule(2), step_schedule(0.125, 0.25), PerturbationDist::rademacher(), 5,
                {0.5, 0.5},  {p1(0.5), p1(0.5)}, 0, ReferenceSolution{0.5, p1(0.5), 0.0}};
  try {
    (void)run(cfg);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.iteration(), 0u);
  }
}

TEST(RunProperty, FeasibilityAndLambdaInvariants) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RunConfig cfg = five_agent_run(300, seed);
    cfg.x0 = {p1(-100), p1(100), p1(50), p1(-3), p1(0)};
    const RunRecord r = run(cfg);
    const double mean0 = r.mean_lambda(0);
    for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
      ASSERT_NEAR(r.mean_lambda(k), mean0, 1e-12) << "k=" << k;
      for (const AgentState& a : r.trajectory[k]) {
        ASSERT_LE(cfg.problem.constraint().distance(a.x), 1e-9);
        ASSERT_GE(a.lambda, 0.0);
        ASSERT_LE(a.lambda, 1.0);
      }
    }
  }
}

TEST(RunProperty, LambdaSpreadFollowsMixingEnvelope) {
  // lambda(k+1) = Psi(k, 0) lambda(0), so |lambda_i - mean| <= e_k * sum |lambda_j(0)|.
  const RunRecord r = run(five_agent_run(200, 0));
  const MixingEstimate est = mixing_rate_estimate(fig2_schedule(), 199);
  const double mass = 0.1 + 0.3 + 0.5 + 0.7 + 0.9;
  for (std::size_t k = 0; k < 200; ++k) {
    const double spread = r.metrics[k + 1].lambda_spread;
    if (est.errors[k] >= kMixingFloor) {
      ASSERT_LE(spread, 1.1 * est.mu_hat * std::pow(est.beta_hat, static_cast<double>(k)) * mass) << "k=" << k;
    } else {
      ASSERT_LE(spread, 1e-12);
    }
  }
}

TEST(RunProperty, SeedDeterminism) {
  const RunRecord a = run(five_agent_run(100, 9));
  const RunRecord b = run(five_agent_run(100, 9));
  for (std::size_t k = 0; k < a.trajectory.size(); ++k) {
    for (std::size_t i = 0; i < 5; ++i) {
      ASSERT_EQ(a.trajectory[k][i].x, b.trajectory[k][i].x);
      ASSERT_EQ(a.trajectory[k][i].lambda, b.trajectory[k][i].lambda);
    }
    ASSERT_EQ(a.metrics[k].regret_running, b.metrics[k].regret_running);
  }
}

TEST(RunProperty, ConsensusImproves) {
  double at50 = 0.0, at500 = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RunRecord r = run(five_agent_run(500, seed));
    at50 += r.metrics[50].consensus_error / 10;
    at500 += r.metrics[500].consensus_error / 10;
  }
  EXPECT_LT(at500, 0.05);
  EXPECT_LT(at500, at50);
}

TEST(RunProperty, StochasticPathInTwoDimensions) {
  // p = 2 makes the estimator genuinely random; seeds must differ yet all converge.
  const std::vector<Point> centers{Point::Constant(2, 1.0), Point::Constant(2, -1.0), Point::Zero(2),
                                   (Point(2) << 2.0, 0.0).finished()};
  const IntervalProblem problem =
      quadratic_interval_problem(Interval(0.5, 2.0), centers, ConstraintSet::ball(Point::Zero(2), 10.0));
  const RunConfig base{problem,          ring_schedule(4), step_schedule(0.125, 0.25), PerturbationDist::rademacher(),
                       2000,             {0.2, 0.4, 0.6, 0.8},
                       std::vector<Point>(4, Point::Zero(2)), 0, std::nullopt};
  RunConfig a = base, b = base;
  a.seed = 1;
  b.seed = 2;
  const RunRecord ra = run(a), rb = run(b);
  EXPECT_NE(ra.trajectory[5][0].x, rb.trajectory[5][0].x);
  const Point expected = (Point(2) << 0.5, 0.0).finished();  // mean of the centers
  EXPECT_LT((ra.mean_x(2000) - expected).norm(), 0.1);
  EXPECT_LT((rb.mean_x(2000) - expected).norm(), 0.1);
}

TEST(ReferenceSolveTest, FiveAgent) {
  const ReferenceSolution ref = reference_solve(five_agent_problem(), 0.5);
  EXPECT_NEAR(ref.x_star[0], 1.0, 1e-4);
  // 1.25 * ((1-3)^2 + (1-2)^2 + 0 + (1-0)^2 + (1+1)^2)
  EXPECT_NEAR(ref.f_star, 12.5, 1e-8);
}

TEST(ReferenceSolveTest, DesignedProblem) {
  for (double lambda : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(reference_solve(designed_pareto_problem(), lambda).x_star[0], 3 - 2 * lambda, 1e-4);
  }
}

TEST(ReferenceSolveTest, ClassicalQuadraticAndBoundaryMinimizer) {
  IntervalFn g{1, [](const Point& x) {
                 const double v = (x[0] - 5) * (x[0] - 5);
                 return Interval(v, v);
               }};
  const IntervalProblem inside({g}, ConstraintSet::box(p1(-100), p1(100)));
  for (double lambda : {0.2, 0.7}) EXPECT_NEAR(reference_solve(inside, lambda).x_star[0], 5.0, 1e-6);
  const IntervalProblem clipped({g}, ConstraintSet::ball(p1(0), 2.0));
  EXPECT_NEAR(reference_solve(clipped, 0.5).x_star[0], 2.0, 1e-9);
}

TEST(ReferenceSolveTest, TwoDimensionalMinimizer) {
  const std::vector<Point> centers{(Point(2) << 1.0, 2.0).finished(), (Point(2) << 3.0, -2.0).finished()};
  const IntervalProblem problem =
      quadratic_interval_problem(Interval(1.0, 3.0), centers, ConstraintSet::ball(Point::Zero(2), 50.0));
  const ReferenceSolution ref = reference_solve(problem, 0.3);
  EXPECT_NEAR(ref.x_star[0], 2.0, 1e-6);
  EXPECT_NEAR(ref.x_star[1], 0.0, 1e-6);
}

TEST(ReferenceSolveTest, DeterministicAndValidated) {
  const ReferenceSolution a = reference_solve(designed_pareto_problem(), 0.37);
  const ReferenceSolution b = reference_solve(designed_pareto_problem(), 0.37);
  EXPECT_EQ(a.x_star, b.x_star);
  EXPECT_EQ(a.f_star, b.f_star);
  EXPECT_THROW((void)reference_solve(five_agent_problem(), 0.0), InvalidArgument);
  EXPECT_THROW((void)reference_solve(five_agent_problem(), 1.0), InvalidArgument);
}

RunRecord frozen_record(const Point& x, double lambda, std::size_t agents, std::size_t T) {
  RunRecord r;
  r.trajectory.assign(T + 1, std::vector<AgentState>(agents, AgentState{x, lambda}));
  return r;
}

TEST(RegretTest, FrozenAtOptimumIsZero) {
  const IntervalProblem problem = five_agent_problem();
  const ReferenceSolution ref = reference_solve(problem, 0.5);
  const auto curve = regret_curve(frozen_record(ref.x_star, 0.5, 5, 20), ref, problem);
  for (double r : curve) EXPECT_NEAR(r, 0.0, 1e-12);
}

TEST(RegretTest, ConstantGap) {
  const IntervalProblem problem = designed_pareto_problem();
  const ReferenceSolution ref = reference_solve(problem, 0.5);
  const double gap = problem.scalarized_local(0, p1(0.0), 0.5) - ref.f_star;
  const auto curve = regret_curve(frozen_record(p1(0.0), 0.5, 1, 30), ref, problem);
  for (double r : curve) EXPECT_NEAR(r, gap, 1e-12);
  EXPECT_NEAR(regret(frozen_record(p1(0.0), 0.5, 1, 30), ref, problem), gap, 1e-12);
}

TEST(RegretTest, MatchesRunningMetric) {
  const RunRecord r = run(five_agent_run(200, 4));
  const auto curve = regret_curve(r, r.reference, five_agent_problem());
  for (std::size_t t = 1; t <= 200; ++t) EXPECT_NEAR(curve[t - 1], r.metrics[t].regret_running, 1e-9);
}

TEST(RegretTest, FiveAgentRegretIsNegativeAndShrinks) {
  // Agents biased toward their own centers make sum_i f_i(x_i) undercut the
  // consensus optimum, so R(T) approaches zero from below.
  double r50 = 0.0, r500 = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RunRecord r = run(five_agent_run(500, seed));
    r50 += r.metrics[50].regret_running / 10;
    r500 += r.metrics[500].regret_running / 10;
  }
  EXPECT_LT(r50, 0.0);
  EXPECT_LT(r500, 0.0);
  EXPECT_LT(std::abs(r500), std::abs(r50));
}

TEST(ParetoSweepTest, DesignedProblemFront) {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  const auto front = pareto_sweep(designed_pareto_problem(), grid);
  ASSERT_EQ(front.size(), 9u);
  for (const auto& pt : front) {
    EXPECT_NEAR(pt.x_star[0], 3 - 2 * pt.lambda, 1e-3);
    EXPECT_TRUE(pt.pareto_optimal) << "lambda=" << pt.lambda;
    EXPECT_DOUBLE_EQ(pt.aggregate.lo(), (pt.x_star[0] - 1) * (pt.x_star[0] - 1));
  }
}

TEST(ParetoSweepTest, FiveAgentSharesMinimizer) {
  const std::vector<double> grid{0.05, 0.1, 0.25, 0.3, 0.5, 0.7, 0.75, 0.9, 0.95};
  const auto front = pareto_sweep(five_agent_problem(), grid);
  for (const auto& pt : front) {
    EXPECT_NEAR(pt.x_star[0], 1.0, 1e-3);
    EXPECT_TRUE(pt.pareto_optimal);
  }
}

TEST(RunTest, DesignedProblemToleratesPerturbationsPastTheBox) {
  // x0 at the upper corner puts x + c*Delta beyond 3.25 on the first steps.
  const RunConfig cfg{designed_pareto_problem(), complete_schedule(1), step_schedule(0.125, 0.25),
                      PerturbationDist::rademacher(), 3000, {0.3}, {p1(3.0)}, 1, std::nullopt};
  const RunRecord r = run(cfg);
  EXPECT_NEAR(r.mean_x(3000)[0], 2.4, 0.05);
}

TEST(ParetoSweepTest, RejectsBadGrids) {
  EXPECT_THROW((void)pareto_sweep(designed_pareto_problem(), {}), InvalidArgument);
  const std::vector<double> edge{0.0, 0.5};
  EXPECT_THROW((void)pareto_sweep(designed_pareto_problem(), edge), InvalidArgument);
}

TEST(RateFitTest, PowerLaws) {
  std::vector<std::pair<double, double>> power, constant;
  for (int t = 1; t <= 100; ++t) {
    power.emplace_back(t, std::pow(t, -0.125));
    constant.emplace_back(t, 3.0);
  }
  EXPECT_NEAR(rate_fit(power).slope, -0.125, 1e-6);
  EXPECT_NEAR(rate_fit(constant).slope, 0.0, 1e-12);
}

TEST(RateFitTest, SkipsNonPositiveValues) {
  std::vector<std::pair<double, double>> curve;
  for (int t = 1; t <= 20; ++t) curve.emplace_back(t, t % 4 == 0 ? -1.0 : 1.0 / t);
  const RateFit fit = rate_fit(curve);
  EXPECT_EQ(fit.excluded_nonpositive, 3u);  // t = 12, 16, 20
  EXPECT_EQ(fit.points_used, 7u);
  EXPECT_NEAR(fit.slope, -1.0, 1e-9);
  curve.resize(9);
  EXPECT_THROW((void)rate_fit(curve), InvalidArgument);
}

}  // namespace
}  // namespace diop
