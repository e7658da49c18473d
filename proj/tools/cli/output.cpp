#include "cli/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace diop::cli {
namespace {

nlohmann::json point_json(const Point& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) arr.push_back(p[i]);
  return arr;
}

std::size_t early_index(std::size_t T) { return (T + 9) / 10; }

}  // namespace

std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return {buf.data(), ptr};
}

void write_trajectory_csv(std::ostream& out, const RunRecord& record) {
  const int p = record.trajectory.empty() ? 0 : static_cast<int>(record.trajectory.front().front().x.size());
  out << "iter,agent";
  for (int q = 0; q < p; ++q) out << ",x_" << q;
  out << ",lambda,consensus_err,regret_running\n";
  for (std::size_t k = 0; k < record.trajectory.size(); ++k) {
    const auto& m = record.metrics[k];
    const std::string tail = format_real(m.consensus_error) + "," + format_real(m.regret_running) + "\n";
    for (std::size_t i = 0; i < record.trajectory[k].size(); ++i) {
      const AgentState& a = record.trajectory[k][i];
      out << k << ',' << i;
      for (int q = 0; q < p; ++q) out << ',' << format_real(a.x[q]);
      out << ',' << format_real(a.lambda) << ',' << tail;
    }
  }
}

void write_pareto_csv(std::ostream& out, std::span<const ParetoPoint> front) {
  const auto p = front.empty() ? 0 : front.front().x_star.size();
  out << "lambda";
  for (Eigen::Index q = 0; q < p; ++q) out << ",x_star_" << q;
  out << ",G_lo,G_hi,pareto_flag\n";
  for (const auto& pt : front) {
    out << format_real(pt.lambda);
    for (Eigen::Index q = 0; q < p; ++q) out << ',' << format_real(pt.x_star[q]);
    out << ',' << format_real(pt.aggregate.lo()) << ',' << format_real(pt.aggregate.hi()) << ','
        << (pt.pareto_optimal ? "true" : "false") << '\n';
  }
}

SummaryReport summarize(const std::string& problem, const std::string& schedule, const IntervalProblem& instance,
                        std::span<const RunRecord> records, const CheckThresholds& thresholds) {
  if (records.empty()) throw InvalidArgument("summary needs at least one run");
  SummaryReport report;
  report.problem = problem;
  report.schedule = schedule;
  report.iterations = records.front().iterations();
  report.agents = instance.agents();
  report.dim = instance.dim();
  report.lambda0_mean = records.front().mean_lambda(0);
  report.reference = records.front().reference;
  report.mean_x = Point::Zero(instance.dim());

  const std::size_t T = report.iterations;
  const std::size_t early = early_index(T);
  const auto count = static_cast<double>(records.size());
  std::vector<double> mean_curve(T, 0.0);
  bool lambda_ok = true;
  bool feasible = true;

  for (const RunRecord& r : records) {
    SeedSummary s;
    s.seed = r.seed;
    for (const AgentState& a : r.trajectory.back()) {
      s.x_final.push_back(a.x);
      s.lambda_final.push_back(a.lambda);
      lambda_ok = lambda_ok && std::abs(a.lambda - report.lambda0_mean) <= thresholds.lambda_consensus;
      feasible = feasible && instance.constraint().distance(a.x) <= thresholds.feasibility;
    }
    s.mean_x = r.mean_x(T);
    s.consensus_error = r.metrics[T].consensus_error;
    s.consensus_error_early = r.metrics[early].consensus_error;
    s.regret = r.metrics[T].regret_running;
    s.regret_early = r.metrics[early].regret_running;
    for (std::size_t t = 1; t <= T; ++t) mean_curve[t - 1] += r.metrics[t].regret_running / count;

    report.mean_x += s.mean_x / count;
    report.mean_lambda += r.mean_lambda(T) / count;
    report.consensus_error += s.consensus_error / count;
    report.consensus_error_early += s.consensus_error_early / count;
    report.regret += s.regret / count;
    report.regret_early += s.regret_early / count;
    report.seeds.push_back(std::move(s));
  }

  if (T >= 10) {
    std::vector<std::pair<double, double>> curve;
    curve.reserve(T);
    for (std::size_t t = 1; t <= T; ++t) curve.emplace_back(static_cast<double>(t), mean_curve[t - 1]);
    try {
      report.rate_slope = rate_fit(curve).slope;
    } catch (const InvalidArgument&) {
      report.rate_slope.reset();
    }
  }

  report.checks.emplace_back("lambda_consensus", lambda_ok);
  report.checks.emplace_back("feasible", feasible);
  report.checks.emplace_back("consensus", report.consensus_error < thresholds.consensus_error &&
                                              (T < 10 || report.consensus_error < report.consensus_error_early ||
                                               report.consensus_error == 0.0));
  report.checks.emplace_back("near_reference",
                             (report.mean_x - report.reference.x_star).norm() <= thresholds.reference_distance);
  report.checks.emplace_back("regret_decreasing", T >= 10 && report.regret < report.regret_early);
  report.checks.emplace_back("regret_magnitude_decreasing",
                             T >= 10 && std::abs(report.regret) < std::abs(report.regret_early));
  return report;
}

nlohmann::json to_json(const SummaryReport& report) {
  using nlohmann::json;
  json seeds = json::array();
  for (const auto& s : report.seeds) {
    json xs = json::array();
    for (const auto& x : s.x_final) xs.push_back(point_json(x));
    seeds.push_back({{"seed", s.seed},
                     {"x_final", xs},
                     {"lambda_final", s.lambda_final},
                     {"mean_x", point_json(s.mean_x)},
                     {"consensus_error", s.consensus_error},
                     {"consensus_error_early", s.consensus_error_early},
                     {"regret", s.regret},
                     {"regret_early", s.regret_early}});
  }
  json checks = json::object();
  for (const auto& [name, ok] : report.checks) checks[name] = ok;
  return {{"problem", report.problem},
          {"schedule", report.schedule},
          {"T", report.iterations},
          {"early_iteration", early_index(report.iterations)},
          {"agents", report.agents},
          {"dim", report.dim},
          {"lambda0_mean", report.lambda0_mean},
          {"reference",
           {{"lambda_star", report.reference.lambda_star},
            {"x_star", point_json(report.reference.x_star)},
            {"f_star", report.reference.f_star}}},
          {"per_seed", seeds},
          {"seed_mean",
           {{"mean_x", point_json(report.mean_x)},
            {"mean_lambda", report.mean_lambda},
            {"consensus_error", report.consensus_error},
            {"consensus_error_early", report.consensus_error_early},
            {"regret", report.regret},
            {"regret_early", report.regret_early}}},
          {"rate_slope", report.rate_slope ? json(*report.rate_slope) : json(nullptr)},
          {"checks", checks}};
}

}  // namespace diop::cli
