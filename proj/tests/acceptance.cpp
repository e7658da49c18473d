// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "diop/engine.hpp"
#include "diop/network.hpp"
#include "diop/problems.hpp"
#include "diop/rng.hpp"
#include "diop/zeroth_order.hpp"

namespace {

using namespace diop;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  template <typename... Args>
  void require(bool ok, Args&&... what) {
    std::ostringstream line;
    line.precision(8);
    line << (ok ? "" : "violated: ");
    (line << ... << what);
    notes.push_back(line.str());
    passed = passed && ok;
  }
  template <typename... Args>
  void info(Args&&... what) {
    std::ostringstream line;
    line.precision(8);
    line << "info: ";
    (line << ... << what);
    notes.push_back(line.str());
  }
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;  // <= 0: no limit
  std::function<Outcome()> check;
};

RunConfig five_agent_run(std::size_t iterations, std::uint64_t seed) {
  return cli::parse_config(cli::five_agent_config_json(iterations, {seed})).run_config(seed);
}

Outcome five_agent_reproduction() {
  Outcome o;
  double worst_lambda = 0.0, mean_x = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RunRecord r = run(five_agent_run(500, seed));
    for (const AgentState& a : r.trajectory.back()) worst_lambda = std::max(worst_lambda, std::abs(a.lambda - 0.5));
    mean_x += r.mean_x(500)[0] / 20;
  }
  o.require(worst_lambda <= 1e-6, "max_i |lambda_i(500) - 0.5| = ", worst_lambda);
  o.require(mean_x >= 0.9 && mean_x <= 1.1, "20-seed mean xbar(500) = ", mean_x);
  return o;
}

Outcome pareto_front() {
  Outcome o;
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  const auto front = pareto_sweep(designed_pareto_problem(), grid);
  double worst = 0.0;
  std::size_t dominated = 0;
  for (const auto& pt : front) {
    worst = std::max(worst, std::abs(pt.x_star[0] - (3 - 2 * pt.lambda)));
    if (!pt.pareto_optimal) ++dominated;
  }
  o.require(front.size() == 9, front.size(), " sweep points");
  o.require(worst <= 1e-3, "max |x*(lambda) - (3 - 2 lambda)| = ", worst);
  o.require(dominated == 0, dominated, " aggregates dominated within the sweep");
  return o;
}

Outcome estimator() {
  Outcome o;
  const auto dist = PerturbationDist::rademacher();

  std::mt19937_64 gen(7);
  // c(k) = (k+1)^-delta stays above 0.1 for any run shorter than 10^4 steps
  std::uniform_real_distribution<double> u(-5.0, 5.0), uc(0.1, 1.0);
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100000; ++t) {
    const double a = u(gen), b = u(gen), e = u(gen), x = u(gen);
    const ScalarOracle f = [=](const Point& p, double) { return a * p[0] * p[0] + b * p[0] + e; };
    CounterRng rng(11, 0, t);
    const auto est = randomized_difference(f, Point::Constant(1, x), 0.5, uc(gen), dist, rng);
    const double exact = 2 * a * x + b;
    worst = std::max(worst, std::abs(est.d[0] - exact));
  }
  o.require(worst <= 1e-12, "1-D quadratic: max |d - f'(x)| = ", worst, " over 100000 draws");

  // f(x) = x' A x + b' x with a dense symmetric A, p = 5.
  constexpr int p = 5;
  Matrix A(p, p);
  Point b(p), x(p);
  for (int i = 0; i < p; ++i) {
    b[i] = u(gen) / 4;
    x[i] = u(gen) / 4;
    for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = u(gen) / 10;
  }
  const ScalarOracle f = [&](const Point& y, double) { return y.dot(A * y) + b.dot(y); };
  const Point grad = 2 * A * x + b;
  constexpr std::uint64_t n = 100000;
  Point sum = Point::Zero(p), sumsq = Point::Zero(p);
  for (std::uint64_t t = 0; t < n; ++t) {
    CounterRng rng(13, 1, t);
    const auto est = randomized_difference(f, x, 0.5, 0.1, dist, rng);
    sum += est.d;
    sumsq += est.d.cwiseProduct(est.d);
  }
  const Point mean = sum / static_cast<double>(n);
  int outside = 0;
  double worst_z = 0.0;
  for (int q = 0; q < p; ++q) {
    const double var = sumsq[q] / static_cast<double>(n) - mean[q] * mean[q];
    const double se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    const double z = std::abs(mean[q] - grad[q]) / std::max(se, 1e-300);
    worst_z = std::max(worst_z, z);
    if (std::abs(mean[q] - grad[q]) > 3 * se) ++outside;
  }
  o.require(outside == 0, "p=5 Monte-Carlo mean: worst |mean - grad| / se = ", worst_z, " over ", n, " samples");
  return o;
}

Outcome mixing() {
  Outcome o;
  const GraphSchedule schedule = fig2_schedule();
  const MixingEstimate est = mixing_rate_estimate(schedule, 200);
  const double e200 = mixing_error(transition_product(schedule, 200, 0).psi);
  o.require(e200 < 1e-6, "max_ij |Psi(200,0)_ij - 1/5| = ", e200);
  o.require(est.beta_hat < 1.0, "beta_hat = ", est.beta_hat, ", mu_hat = ", est.mu_hat);
  std::size_t outside = 0;
  for (std::size_t k = 0; k < est.errors.size(); ++k) {
    const double bound = est.mu_hat * std::pow(est.beta_hat, static_cast<double>(k));
    if (est.errors[k] > bound * (1 + 1e-12) + 1e-15) ++outside;
  }
  o.require(outside == 0, outside, " of ", est.errors.size(), " errors above mu_hat beta_hat^k");
  return o;
}

Point random_point(std::mt19937_64& gen, int dim, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Point p(dim);
  for (int q = 0; q < dim; ++q) p[q] = u(gen);
  return p;
}

void projection_cases(Outcome& o, const ConstraintSet& set, const std::string& label, std::mt19937_64& gen) {
  constexpr double tol = 1e-9;
  const double spread = 2.5 * set.max_norm() + 1.0;
  int bad[4] = {0, 0, 0, 0};
  int not_idempotent = 0;
  for (int t = 0; t < 10000; ++t) {
    const Point x = random_point(gen, set.dim(), spread);
    const Point y = random_point(gen, set.dim(), spread);
    const Point px = set.project(x), py = set.project(y);
    if ((x - px).dot(py - px) > tol) ++bad[0];
    if ((px - py).norm() > (x - y).norm() + tol) ++bad[1];
    if ((px - py).squaredNorm() > (x - y).dot(px - py) + tol) ++bad[2];
    if ((px - py).squaredNorm() > (x - py).squaredNorm() - (x - px).squaredNorm() + tol) ++bad[3];
    if (set.project(px) != px) ++not_idempotent;
  }
  o.require(bad[0] + bad[1] + bad[2] + bad[3] == 0, label, ": violations (a,b,c,d) = ", bad[0], ",", bad[1], ",",
            bad[2], ",", bad[3], " in 10000 cases");
  o.require(not_idempotent == 0, label, ": ", not_idempotent, " non-idempotent projections");
}

Outcome projections() {
  Outcome o;
  std::mt19937_64 gen(5);
  for (int dim : {1, 3, 6}) {
    const Point center = random_point(gen, dim, 5.0);
    projection_cases(o, ConstraintSet::ball(center, 2.0 + dim), "ball p=" + std::to_string(dim), gen);
    const Point corner = random_point(gen, dim, 5.0);
    Point width = random_point(gen, dim, 3.0).cwiseAbs();
    width[0] = 0.0;  // one degenerate side
    projection_cases(o, ConstraintSet::box(corner, corner + width), "box p=" + std::to_string(dim), gen);
  }
  return o;
}

Outcome consensus() {
  Outcome o;
  double at50 = 0.0, at500 = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RunRecord r = run(five_agent_run(500, seed));
    at50 += r.metrics[50].consensus_error / 10;
    at500 += r.metrics[500].consensus_error / 10;
  }
  o.require(at500 < 0.05, "10-seed mean consensus error at T=500: ", at500);
  o.require(at500 < at50, "T=500 below T=50 (", at50, ")");
  return o;
}

Outcome regret_trend() {
  Outcome o;
  constexpr std::size_t horizon = 5000;
  std::vector<double> mean(horizon, 0.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RunRecord r = run(five_agent_run(horizon, seed));
    const auto curve = regret_curve(r, r.reference, five_agent_problem());
    for (std::size_t t = 0; t < horizon; ++t) mean[t] += curve[t] / 10;
  }
  std::vector<std::pair<double, double>> window, magnitude;
  for (std::size_t T = 100; T <= horizon; ++T) {
    window.emplace_back(static_cast<double>(T), mean[T - 1]);
    magnitude.emplace_back(static_cast<double>(T), std::abs(mean[T - 1]));
  }
  const double r100 = mean[99], r5000 = mean[horizon - 1];
  try {
    const RateFit fit = rate_fit(window);
    o.require(fit.slope <= -0.05, "log-log slope of R(T) = ", fit.slope, " (", fit.points_used, " points, ",
              fit.excluded_nonpositive, " non-positive skipped)");
  } catch (const InvalidArgument& e) {
    o.require(false, "log-log slope of R(T) undefined: ", e.what());
  }
  o.require(r5000 < r100, "R(5000) = ", r5000, " < R(100) = ", r100);
  o.info("|R(T)| log-log slope = ", rate_fit(magnitude).slope);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "diop_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);

  nlohmann::json two_dim = {
      {"problem",
       {{"preset", "quadratic"},
        {"coeff", {0.5, 2.0}},
        {"centers", {{1.0, 0.0}, {-1.0, 2.0}, {0.0, -1.0}, {2.0, 2.0}}},
        {"constraint", {{"ball", {{"center", {0.0, 0.0}}, {"radius", 5.0}}}}}}},
      {"schedule", {{"preset", "ring"}, {"n", 4}}},
      {"epsilon", 0.1},
      {"delta", 0.3},
      {"T", 300},
      {"seeds", {1, 2, 3, 4, 5, 6}},
      {"lambda0", {0.2, 0.4, 0.6, 0.8}},
      {"perturbation", {{"kind", "two_point"}, {"magnitude", 0.5}}}};
  const std::vector<std::pair<std::string, nlohmann::json>> configs = {
      {"five_agent", cli::five_agent_config_json(500, {1, 2, 3})}, {"quadratic2d", two_dim}};

  std::ostringstream sink;
  for (const auto& [name, doc] : configs) {
    const fs::path cfg = root / (name + ".json");
    std::ofstream(cfg) << doc.dump(2);
    const fs::path a = root / (name + "_a"), b = root / (name + "_b"), c = root / (name + "_c");
    const int ra = cli::cmd_run(cfg, {a, {}, 1}, sink, sink);
    const int rb = cli::cmd_run(cfg, {b, {}, 1}, sink, sink);
    const int rc = cli::cmd_run(cfg, {c, {}, 4}, sink, sink);
    o.require(ra == 0 && rb == 0 && rc == 0, name, ": runs exited ", ra, ",", rb, ",", rc);
    std::size_t files = 0, mismatched = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      if (entry.path().extension() != ".csv") continue;
      ++files;
      const std::string first = slurp(entry.path());
      const fs::path file = entry.path().filename();
      if (first != slurp(b / file) || first != slurp(c / file)) ++mismatched;
    }
    o.require(files > 0 && mismatched == 0, name, ": ", mismatched, " of ", files,
              " trajectory CSVs differ across reruns / worker counts");
  }
  fs::remove_all(root);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diop acceptance checks"};
  std::vector<int> selected;
  app.add_option("-c,--criterion", selected, "criterion numbers to run (default: all)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "five-agent quadratic reproduction", 5.0, five_agent_reproduction},
      {2, "pareto front recovery", 2.0, pareto_front},
      {3, "estimator exactness and unbiasedness", 5.0, estimator},
      {4, "transition matrix mixing", 1.0, mixing},
      {5, "projection contracts", 1.0, projections},
      {6, "consensus", 0.0, consensus},
      {7, "regret trend", 60.0, regret_trend},
      {8, "determinism", 0.0, determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome.require(false, "exception: ", e.what());
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.time_limit_s > 0) outcome.require(seconds < c.time_limit_s, "runtime below ", c.time_limit_s, " s");
    std::printf("%s criterion %d: %s (%.3f s)\n", outcome.passed ? "PASS" : "FAIL", c.id, c.title, seconds);
    for (const auto& note : outcome.notes) std::printf("    %s\n", note.c_str());
    if (!outcome.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
