#include "cli/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "diop/engine.hpp"
#include "diop/network.hpp"
#include "diop/problems.hpp"
#include "diop/rng.hpp"
#include "diop/zeroth_order.hpp"

namespace diop::cli {
namespace {

class Reporter {
 public:
  explicit Reporter(std::string name) { result_.name = std::move(name); }

  template <typename... Args>
  void check(bool ok, Args&&... what) {
    std::ostringstream line;
    line.precision(6);
    line << (ok ? "ok   " : "FAIL ");
    (line << ... << what);
    result_.details.push_back(line.str());
    result_.passed = result_.passed && ok;
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

Point uniform_point(std::mt19937_64& gen, int dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Point p(dim);
  for (int q = 0; q < dim; ++q) p[q] = u(gen);
  return p;
}

void projection_contracts(Reporter& rep, const ConstraintSet& set, const char* label, std::mt19937_64& gen) {
  constexpr int kCases = 10000;
  constexpr double kTol = 1e-9;
  const double spread = 3.0 * set.max_norm();
  int bad_a = 0, bad_b = 0, bad_c = 0, bad_d = 0, bad_idem = 0;
  for (int t = 0; t < kCases; ++t) {
    const Point x = uniform_point(gen, set.dim(), -spread, spread);
    const Point y = uniform_point(gen, set.dim(), -spread, spread);
    const Point px = set.project(x);
    const Point py = set.project(y);
    // y projected is a member of the set.
    if ((x - px).dot(py - px) > kTol) ++bad_a;
    if ((px - py).norm() > (x - y).norm() + kTol) ++bad_b;
    if ((x - y).dot(py - px) > -(px - py).squaredNorm() + kTol) ++bad_c;
    if ((x - px).squaredNorm() + (py - px).squaredNorm() > (x - py).squaredNorm() + kTol) ++bad_d;
    if (set.project(px) != px) ++bad_idem;
  }
  rep.check(bad_a == 0, label, " obtuse angle <x-P(x), y-P(x)> <= 0: ", bad_a, " violations");
  rep.check(bad_b == 0, label, " nonexpansive: ", bad_b, " violations");
  rep.check(bad_c == 0, label, " firmly nonexpansive: ", bad_c, " violations");
  rep.check(bad_d == 0, label, " ||x-P(x)||^2 + ||y-P(x)||^2 <= ||x-y||^2: ", bad_d, " violations");
  rep.check(bad_idem == 0, label, " idempotent (exact): ", bad_idem, " violations");
}

SuiteResult projection_suite() {
  Reporter rep("projection");
  std::mt19937_64 gen(20240601);
  Point center(3);
  center << 1.0, -2.0, 0.5;
  projection_contracts(rep, ConstraintSet::ball(center, 4.0), "ball", gen);
  Point lower(3), upper(3);
  lower << -1.0, 0.0, 2.0;
  upper << 3.0, 0.5, 2.0;
  projection_contracts(rep, ConstraintSet::box(lower, upper), "box", gen);
  return rep.take();
}

SuiteResult mixing_suite() {
  Reporter rep("mixing");
  const GraphSchedule schedule = fig2_schedule();
  rep.check(joint_connectivity_check(schedule, 4), "fig2 jointly connected with kappa=4");
  double worst = 0.0;
  Matrix psi = schedule.at(0).weights();
  for (std::size_t k = 1; k <= 200; ++k) {
    psi = schedule.at(k).weights() * psi;
    worst = std::max({worst, (psi.rowwise().sum().array() - 1.0).abs().maxCoeff(),
                      (psi.colwise().sum().array() - 1.0).abs().maxCoeff()});
  }
  rep.check(worst <= 1e-10, "products doubly stochastic, worst deviation ", worst);
  const MixingEstimate est = mixing_rate_estimate(schedule, 200);
  rep.check(est.beta_hat < 1.0, "fitted beta_hat = ", est.beta_hat, " (mu_hat = ", est.mu_hat, ")");
  rep.check(est.errors[200] < 1e-6, "mixing error at k=200: ", est.errors[200]);
  int outside = 0;
  for (std::size_t k = 0; k < est.errors.size(); ++k) {
    if (est.errors[k] < kMixingFloor) continue;
    if (est.errors[k] > 1.1 * est.mu_hat * std::pow(est.beta_hat, static_cast<double>(k))) ++outside;
  }
  rep.check(outside == 0, "envelope 1.1 mu_hat beta_hat^k: ", outside, " points outside");
  return rep.take();
}

SuiteResult estimator_suite() {
  Reporter rep("estimator");
  const PerturbationDist dist = PerturbationDist::rademacher();
  const double a = 1.7, b = -0.4, e = 2.0;
  const ScalarOracle quad = [&](const Point& x, double) { return a * x[0] * x[0] + b * x[0] + e; };
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 2000; ++t) {
    CounterRng rng(7, 0, t);
    const double x = -5.0 + 0.005 * static_cast<double>(t);
    const double c = 1.0 / std::pow(static_cast<double>(t) + 1.0, 0.25);
    const auto est = randomized_difference(quad, Point::Constant(1, x), 0.5, c, dist, rng);
    worst = std::max(worst, std::abs(est.d[0] - (2.0 * a * x + b)));
  }
  rep.check(worst <= 1e-12, "1-D quadratic exactness, worst error ", worst);

  constexpr int kDim = 5;
  constexpr int kSamples = 100000;
  Point x(kDim);
  x << 1.0, -0.5, 0.25, 2.0, -1.5;
  const ScalarOracle sq = [](const Point& p, double) { return p.squaredNorm(); };
  Point sum = Point::Zero(kDim), sum_sq = Point::Zero(kDim);
  for (int s = 0; s < kSamples; ++s) {
    CounterRng rng(11, 0, static_cast<std::uint64_t>(s));
    const auto est = randomized_difference(sq, x, 0.5, 0.1, dist, rng);
    sum += est.d;
    sum_sq += est.d.cwiseProduct(est.d);
  }
  const Point mean = sum / kSamples;
  const Point var = sum_sq / kSamples - mean.cwiseProduct(mean);
  int outside = 0;
  for (int q = 0; q < kDim; ++q) {
    const double se = std::sqrt(var[q] / kSamples);
    if (std::abs(mean[q] - 2.0 * x[q]) > 3.0 * se) ++outside;
  }
  rep.check(outside == 0, "p=5 quadratic Monte-Carlo mean within 3 SE: ", outside, " coordinates outside");
  return rep.take();
}

SuiteResult moments_suite() {
  Reporter rep("moments");
  const PerturbationDist dist = PerturbationDist::rademacher();
  double inv_sum = 0.0;
  constexpr int kDraws = 100000;
  for (int s = 0; s < kDraws; ++s) {
    CounterRng rng(3, 0, static_cast<std::uint64_t>(s));
    inv_sum += 1.0 / draw_perturbation(dist, 1, rng)[0];
  }
  const double inv_mean = inv_sum / kDraws;
  rep.check(std::abs(inv_mean) <= 0.01, "sample mean of 1/Delta = ", inv_mean);

  const IntervalProblem problem = five_agent_problem();
  const double bound = estimate_norm_bound(dist, problem.dim(), *problem.lipschitz_hint());
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> ux(-99.0, 99.0);
  std::uniform_real_distribution<double> ul(0.0, 1.0);
  std::uniform_real_distribution<double> uc(0.01, 1.0);
  double first = 0.0, second = 0.0, largest = 0.0;
  constexpr int kSamples = 20000;
  for (int s = 0; s < kSamples; ++s) {
    const std::size_t agent = static_cast<std::size_t>(s) % problem.agents();
    const ScalarOracle f = [&](const Point& p, double l) { return problem.scalarized_local(agent, p, l); };
    CounterRng rng(5, agent, static_cast<std::uint64_t>(s));
    const auto est = randomized_difference(f, Point::Constant(1, ux(gen)), ul(gen), uc(gen), dist, rng);
    const double norm = est.d.norm();
    first += norm / kSamples;
    second += norm * norm / kSamples;
    largest = std::max(largest, norm);
  }
  rep.check(first <= bound, "E||d|| = ", first, " <= p M1 M2 L = ", bound);
  rep.check(second <= bound * bound, "E||d||^2 = ", second, " <= (p M1 M2 L)^2 = ", bound * bound);
  rep.check(largest <= bound, "max ||d|| = ", largest);
  return rep.take();
}

SuiteResult schedule_suite() {
  Reporter rep("schedule");
  const StepSchedule steps(0.125, 0.25);
  const ScheduleReport big = schedule_diagnostics(steps, 10000);
  const ScheduleReport small = schedule_diagnostics(steps, 1000);
  rep.check(!big.iota.converges, "sum iota diverges (decay exponent ", big.iota.decay_exponent, ")");
  rep.check(big.iota.partial_sum - small.iota.partial_sum > 1.0, "sum iota grows from ", small.iota.partial_sum,
            " to ", big.iota.partial_sum);
  rep.check(big.iota_sq.converges && big.iota_sq.tail_term < 1e-7, "sum iota^2 converges, tail term ",
            big.iota_sq.tail_term);
  rep.check(big.iota_c.converges, "sum iota c converges (decay exponent ", big.iota_c.decay_exponent, ")");
  rep.check(big.iota_over_c_sq.converges, "sum (iota/c)^2 converges (decay exponent ",
            big.iota_over_c_sq.decay_exponent, ")");
  return rep.take();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"projection", "mixing", "estimator", "moments", "schedule"};
  return names;
}

SuiteResult run_suite(const std::string& name) {
  if (name == "projection") return projection_suite();
  if (name == "mixing") return mixing_suite();
  if (name == "estimator") return estimator_suite();
  if (name == "moments") return moments_suite();
  if (name == "schedule") return schedule_suite();
  throw std::invalid_argument("unknown suite \"" + name + "\"");
}

}  // namespace diop::cli
