#include <benchmark/benchmark.h>

#include <vector>

#include "diop/engine.hpp"
#include "diop/network.hpp"
#include "diop/rng.hpp"
#include "diop/zeroth_order.hpp"

namespace {

using namespace diop;

RunConfig five_agent(std::size_t iterations) {
  return RunConfig{five_agent_problem(),
                   fig2_schedule(),
                   step_schedule(0.125, 0.25),
                   PerturbationDist::rademacher(),
                   iterations,
                   {0.1, 0.3, 0.5, 0.7, 0.9},
                   std::vector<Point>(5, Point::Zero(1)),
                   1,
                   ReferenceSolution{0.5, Point::Constant(1, 1.0), 12.5}};
}

void BM_RunFiveAgent(benchmark::State& state) {
  const RunConfig cfg = five_agent(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunFiveAgent)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_RunRing(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int dim = 8;
  std::vector<Point> centers;
  for (std::size_t i = 0; i < n; ++i) centers.push_back(Point::Constant(dim, static_cast<double>(i) / n));
  std::vector<double> lambda0(n, 0.5);
  RunConfig cfg{quadratic_interval_problem(Interval(0.5, 2.0), centers, ConstraintSet::ball(Point::Zero(dim), 10.0)),
                ring_schedule(n),
                step_schedule(0.125, 0.25),
                PerturbationDist::rademacher(),
                200,
                lambda0,
                std::vector<Point>(n, Point::Zero(dim)),
                7,
                ReferenceSolution{0.5, Point::Constant(dim, 0.5), 0.0}};
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
}
BENCHMARK(BM_RunRing)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TransitionProduct(benchmark::State& state) {
  const GraphSchedule schedule = fig2_schedule();
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(transition_product(schedule, k, 0));
}
BENCHMARK(BM_TransitionProduct)->Arg(50)->Arg(200);

void BM_RandomizedDifference(benchmark::State& state) {
  const auto dim = static_cast<int>(state.range(0));
  const ScalarOracle f = [](const Point& x, double lambda) { return (lambda + 1.0) * x.squaredNorm(); };
  const Point x = Point::Constant(dim, 0.3);
  const auto dist = PerturbationDist::rademacher();
  std::uint64_t k = 0;
  for (auto _ : state) {
    CounterRng rng(1, 0, k++);
    benchmark::DoNotOptimize(randomized_difference(f, x, 0.5, 0.1, dist, rng));
  }
}
BENCHMARK(BM_RandomizedDifference)->Arg(1)->Arg(16)->Arg(128);

void BM_ReferenceSolve(benchmark::State& state) {
  const IntervalProblem problem = five_agent_problem();
  for (auto _ : state) benchmark::DoNotOptimize(reference_solve(problem, 0.5));
}
BENCHMARK(BM_ReferenceSolve);

}  // namespace

BENCHMARK_MAIN();
