#include "diop/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diop/rng.hpp"

namespace diop {
namespace {

constexpr double kDivergenceFactor = 1e6;

Point mean_of(const std::vector<AgentState>& agents) {
  Point sum = Point::Zero(agents.front().x.size());
  for (const auto& a : agents) sum += a.x;
  return sum / static_cast<double>(agents.size());
}

double mean_lambda_of(const std::vector<AgentState>& agents) {
  double sum = 0.0;
  for (const auto& a : agents) sum += a.lambda;
  return sum / static_cast<double>(agents.size());
}

double objective_gap(const IntervalProblem& problem, const std::vector<AgentState>& agents, double f_star) {
  double total = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    total += problem.scalarized_local(i, agents[i].x, agents[i].lambda);
  }
  return total - f_star;
}

IterationMetrics snapshot_metrics(const IntervalProblem& problem, const std::vector<AgentState>& agents,
                                  const ReferenceSolution& ref) {
  IterationMetrics m;
  const Point xbar = mean_of(agents);
  const double lbar = mean_lambda_of(agents);
  for (const auto& a : agents) {
    m.consensus_error = std::max(m.consensus_error, (a.x - xbar).norm());
    m.lambda_spread = std::max(m.lambda_spread, std::abs(a.lambda - lbar));
  }
  m.optimality_gap = (xbar - ref.x_star).norm();
  m.objective_gap = objective_gap(problem, agents, ref.f_star);
  return m;
}

}  // namespace

Point RunRecord::mean_x(std::size_t k) const { return mean_of(trajectory.at(k)); }

double RunRecord::mean_lambda(std::size_t k) const { return mean_lambda_of(trajectory.at(k)); }

void validate(const RunConfig& config) {
  const std::size_t n = config.problem.agents();
  if (static_cast<std::size_t>(config.schedule.agents()) != n) {
    throw InvalidArgument("schedule has " + std::to_string(config.schedule.agents()) + " agents but the problem has " +
                          std::to_string(n));
  }
  if (config.lambda0.size() != n) throw InvalidArgument("lambda0 length must equal the number of agents");
  if (config.x0.size() != n) throw InvalidArgument("x0 length must equal the number of agents");
  double sum = 0.0;
  for (double l : config.lambda0) {
    if (!(l >= 0.0 && l <= 1.0)) throw InvalidArgument("lambda0 entries must lie in [0, 1]");
    sum += l;
  }
  const double mean = sum / static_cast<double>(n);
  if (!(mean > 0.0 && mean < 1.0)) throw InvalidArgument("mean of lambda0 must lie in (0, 1)");
  for (std::size_t i = 0; i < n; ++i) {
    if (config.x0[i].size() != config.problem.dim()) {
      throw InvalidArgument("x0[" + std::to_string(i) + "] has the wrong dimension");
    }
    if (!config.x0[i].allFinite() || !config.problem.constraint().contains(config.x0[i])) {
      throw InvalidArgument("x0[" + std::to_string(i) + "] is outside the constraint set");
    }
  }
  if (!joint_connectivity_check(config.schedule, config.schedule.kappa())) {
    throw InvalidArgument("schedule is not jointly connected over windows of kappa=" +
                          std::to_string(config.schedule.kappa()));
  }
}

RunRecord run(const RunConfig& config) {
  validate(config);
  const IntervalProblem& problem = config.problem;
  const ConstraintSet& set = problem.constraint();
  const std::size_t n = problem.agents();
  const int p = problem.dim();

  RunRecord record;
  record.seed = config.seed;
  if (config.reference) {
    record.reference = *config.reference;
  } else {
    double sum = 0.0;
    for (double l : config.lambda0) sum += l;
    record.reference = reference_solve(problem, sum / static_cast<double>(n));
  }
  const double runaway = kDivergenceFactor * std::max(1.0, set.max_norm());

  std::vector<AgentState> state(n);
  for (std::size_t i = 0; i < n; ++i) state[i] = {config.x0[i], config.lambda0[i]};

  record.trajectory.reserve(config.iterations + 1);
  record.metrics.reserve(config.iterations + 1);
  record.trajectory.push_back(state);
  record.metrics.push_back(snapshot_metrics(problem, state, record.reference));

  double gap_sum = 0.0;
  std::vector<AgentState> next(n);
  Eigen::VectorXd lambdas(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < config.iterations; ++k) {
    const Matrix& w = config.schedule.at(k).weights();
    const double iota = config.steps.iota(k);
    const double c = config.steps.c(k);
    for (std::size_t i = 0; i < n; ++i) {
      Point xi = Point::Zero(p);
      for (std::size_t j = 0; j < n; ++j) {
        const double wij = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (wij != 0.0) xi += wij * state[j].x;
      }
      const ScalarOracle f = [&problem, i](const Point& x, double lambda) {
        return problem.scalarized_local(i, x, lambda);
      };
      CounterRng rng(config.seed, i, k);
      GradientEstimate est;
      try {
        est = randomized_difference(f, xi, state[i].lambda, c, config.dist, rng);
      } catch (const EvaluationError& e) {
        throw DivergenceError(std::string(e.what()) + " at iteration " + std::to_string(k), k);
      }
      const Point stepped = xi - iota * est.d;
      if (!stepped.allFinite()) {
        throw DivergenceError("non-finite iterate at iteration " + std::to_string(k), k);
      }
      next[i].x = set.project(stepped);
      if (next[i].x.norm() > runaway) {
        throw DivergenceError("iterate escaped the constraint region at iteration " + std::to_string(k), k);
      }
    }
    for (std::size_t j = 0; j < n; ++j) lambdas[static_cast<Eigen::Index>(j)] = state[j].lambda;
    const Eigen::VectorXd mixed = w * lambdas;
    for (std::size_t i = 0; i < n; ++i) {
      next[i].lambda = std::clamp(mixed[static_cast<Eigen::Index>(i)], 0.0, 1.0);
    }
    state.swap(next);

    IterationMetrics m = snapshot_metrics(problem, state, record.reference);
    gap_sum += m.objective_gap;
    m.regret_running = gap_sum / static_cast<double>(k + 1);
    record.trajectory.push_back(state);
    record.metrics.push_back(m);
  }
  return record;
}

ReferenceSolution reference_solve(const IntervalProblem& problem, double lambda_star) {
  if (!(lambda_star > 0.0 && lambda_star < 1.0)) throw InvalidArgument("reference_solve needs 0 < lambda_star < 1");
  const ConstraintSet& set = problem.constraint();
  const int p = problem.dim();
  const auto objective = [&](const Point& x) { return problem.scalarized_total(x, lambda_star); };

  Point x = set.anchor();
  double fx = objective(x);

  // Projected gradient descent with Armijo backtracking.
  double step = 1.0;
  for (int it = 0; it < 20000; ++it) {
    Point grad(p);
    for (int q = 0; q < p; ++q) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[q]));
      Point up = x;
      Point down = x;
      up[q] += h;
      down[q] -= h;
      grad[q] = (objective(up) - objective(down)) / (2.0 * h);
    }
    if (!grad.allFinite() || grad.norm() == 0.0) break;

    Point y;
    double fy = 0.0;
    bool accepted = false;
    while (step > 1e-20) {
      y = set.project(x - step * grad);
      fy = objective(y);
      if (fy <= fx - 1e-4 / step * (y - x).squaredNorm()) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double moved = (y - x).norm();
    x = std::move(y);
    fx = fy;
    if (moved <= 1e-13 * std::max(1.0, x.norm())) break;
    step = std::min(2.0 * step, 1e6);
  }

  // Lattice search on dyadic grids anchored at the origin. Grids are nested,
  // so once the iterate lands on a lattice point it stays on the lattice and
  // exact minimizers with short binary expansions are recovered exactly.
  if (p <= 2) {
    const double extent = std::max(1.0, set.max_norm());
    double h = std::exp2(std::ceil(std::log2(extent)));
    const int reach = 2;
    const int side = 2 * reach + 1;
    const int count = p == 1 ? side : side * side;
    for (int level = 0; level < 64; ++level, h *= 0.5) {
      if (h < 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x.cwiseAbs().maxCoeff())) break;
      const Point center = (x / h).array().round().matrix() * h;
      Point best = set.project(center);
      double fbest = objective(best);
      for (int c = 0; c < count; ++c) {
        Point candidate = center;
        candidate[0] += h * static_cast<double>(c % side - reach);
        if (p == 2) candidate[1] += h * static_cast<double>(c / side - reach);
        candidate = set.project(candidate);
        const double fc = objective(candidate);
        if (fc < fbest) {
          best = std::move(candidate);
          fbest = fc;
        }
      }
      // Values within a few ulps are ties. A tie goes to the lattice point,
      // and an iterate already on this lattice only moves for a real gain.
      const double tie = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fx));
      const bool on_lattice = set.project(center) == x;
      if (on_lattice ? fbest < fx - tie : fbest <= fx + tie) {
        x = std::move(best);
        fx = fbest;
      }
    }
  }

  return {lambda_star, x, fx};
}

std::vector<double> regret_curve(const RunRecord& record, const ReferenceSolution& ref,
                                 const IntervalProblem& problem) {
  const std::size_t T = record.iterations();
  if (T < 1) throw InvalidArgument("regret needs at least one iteration");
  std::vector<double> curve;
  curve.reserve(T);
  double sum = 0.0;
  for (std::size_t k = 1; k <= T; ++k) {
    sum += objective_gap(problem, record.trajectory[k], ref.f_star);
    curve.push_back(sum / static_cast<double>(k));
  }
  return curve;
}

double regret(const RunRecord& record, const ReferenceSolution& ref, const IntervalProblem& problem) {
  return regret_curve(record, ref, problem).back();
}

std::vector<ParetoPoint> pareto_sweep(const IntervalProblem& problem, std::span<const double> lambdas) {
  if (lambdas.empty()) throw InvalidArgument("pareto sweep needs a non-empty lambda grid");
  for (double l : lambdas) {
    if (!(l > 0.0 && l < 1.0)) throw InvalidArgument("pareto sweep weights must lie strictly inside (0, 1)");
  }
  std::vector<ParetoPoint> points;
  std::vector<Interval> pool;
  points.reserve(lambdas.size());
  for (double l : lambdas) {
    ReferenceSolution sol = reference_solve(problem, l);
    ParetoPoint pt{l, sol.x_star, sol.f_star, problem.aggregate(sol.x_star), false};
    pool.push_back(pt.aggregate);
    points.push_back(std::move(pt));
  }
  for (auto& pt : points) pt.pareto_optimal = is_pareto_optimal_in(pt.aggregate, pool);
  return points;
}

RateFit rate_fit(std::span<const std::pair<double, double>> curve) {
  if (curve.size() < 10) throw InvalidArgument("rate_fit needs at least 10 points");
  RateFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = curve.size() / 2; i < curve.size(); ++i) {
    const auto [t, r] = curve[i];
    if (!(r > 0.0) || !(t > 0.0)) {
      ++fit.excluded_nonpositive;
      continue;
    }
    const double lx = std::log(t);
    const double ly = std::log(r);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++fit.points_used;
  }
  if (fit.points_used < 2) throw InvalidArgument("rate_fit has fewer than two positive points in the tail");
  const auto m = static_cast<double>(fit.points_used);
  const double denom = m * sxx - sx * sx;
  if (!(denom > 0.0)) throw InvalidArgument("rate_fit needs distinct T values");
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

}  // namespace diop
