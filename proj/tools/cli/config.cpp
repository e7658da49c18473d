#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace diop::cli {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!names.contains(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing key \"" + std::string(key) + "\" in " + where);
  return *it;
}

double as_real(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(what + " must be finite");
  return d;
}

Point as_point(const json& v, const std::string& what) {
  if (v.is_number()) return Point::Constant(1, as_real(v, what));
  if (!v.is_array() || v.empty()) throw ConfigError(what + " must be a number or a non-empty array");
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<Eigen::Index>(i)] = as_real(v[i], what);
  return p;
}

std::vector<double> as_reals(const json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_real(e, what));
  return out;
}

ConstraintSet parse_constraint(const json& v) {
  check_keys(v, {"ball", "box"}, "problem.constraint");
  if (v.size() != 1) throw ConfigError("problem.constraint needs exactly one of \"ball\" or \"box\"");
  if (v.contains("ball")) {
    const json& b = v["ball"];
    check_keys(b, {"center", "radius"}, "problem.constraint.ball");
    return ConstraintSet::ball(as_point(require(b, "center", "ball"), "ball.center"),
                               as_real(require(b, "radius", "ball"), "ball.radius"));
  }
  const json& b = v["box"];
  check_keys(b, {"lower", "upper"}, "problem.constraint.box");
  return ConstraintSet::box(as_point(require(b, "lower", "box"), "box.lower"),
                            as_point(require(b, "upper", "box"), "box.upper"));
}

std::pair<std::string, IntervalProblem> parse_problem(const json& v) {
  const std::string preset = require(v, "preset", "problem").get<std::string>();
  if (preset == "five_agent") {
    check_keys(v, {"preset"}, "problem");
    return {preset, five_agent_problem()};
  }
  if (preset == "designed_pareto") {
    check_keys(v, {"preset"}, "problem");
    return {preset, designed_pareto_problem()};
  }
  if (preset == "quadratic") {
    check_keys(v, {"preset", "coeff", "centers", "constraint"}, "problem");
    const auto coeff = as_reals(require(v, "coeff", "problem"), "problem.coeff");
    if (coeff.size() != 2) throw ConfigError("problem.coeff must be [lo, hi]");
    std::vector<Point> centers;
    for (const auto& c : require(v, "centers", "problem")) centers.push_back(as_point(c, "problem.centers"));
    const ConstraintSet constraint = parse_constraint(require(v, "constraint", "problem"));
    return {preset, quadratic_interval_problem(Interval(coeff[0], coeff[1]), centers, constraint)};
  }
  throw ConfigError("unknown problem preset \"" + preset + "\" (expected five_agent, designed_pareto, quadratic)");
}

std::pair<std::string, GraphSchedule> parse_schedule(const json& v) {
  if (v.contains("preset")) {
    check_keys(v, {"preset", "n"}, "schedule");
    const std::string preset = v["preset"].get<std::string>();
    if (preset == "fig2") {
      if (v.contains("n") && v["n"].get<int>() != 5) throw ConfigError("schedule preset fig2 has n = 5");
      return {preset, fig2_schedule()};
    }
    const int n = require(v, "n", "schedule").get<int>();
    if (preset == "complete") return {preset, complete_schedule(n)};
    if (preset == "ring") return {preset, ring_schedule(n)};
    throw ConfigError("unknown schedule preset \"" + preset + "\" (expected fig2, complete, ring)");
  }
  check_keys(v, {"n", "edges", "kappa"}, "schedule");
  const int n = require(v, "n", "schedule").get<int>();
  const json& steps = require(v, "edges", "schedule");
  if (!steps.is_array() || steps.empty()) throw ConfigError("schedule.edges must be a non-empty list of edge lists");
  std::vector<WeightedDigraph> pattern;
  for (const auto& step : steps) {
    std::vector<Edge> edges;
    for (const auto& e : step) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("schedule edges must be [i, j] pairs");
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    pattern.push_back(metropolis_weights(n, undirected(edges)));
  }
  int kappa = 0;
  if (v.contains("kappa")) {
    kappa = v["kappa"].get<int>();
  } else {
    kappa = GraphSchedule::min_kappa(pattern);
    if (kappa == 0) throw ConfigError("schedule is not jointly connected for any window length");
  }
  return {"explicit", GraphSchedule(std::move(pattern), kappa)};
}

PerturbationDist parse_perturbation(const json& v) {
  check_keys(v, {"kind", "magnitude"}, "perturbation");
  const std::string kind = require(v, "kind", "perturbation").get<std::string>();
  if (kind == "rademacher") {
    if (v.contains("magnitude")) throw ConfigError("rademacher perturbation takes no magnitude");
    return PerturbationDist::rademacher();
  }
  if (kind == "two_point") {
    return PerturbationDist::symmetric_two_point(as_real(require(v, "magnitude", "perturbation"), "magnitude"));
  }
  throw ConfigError("unknown perturbation kind \"" + kind + "\" (expected rademacher, two_point)");
}

template <typename T>
T parse_number(std::string_view token, const char* what) {
  T value{};
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("cannot parse " + std::string(what) + " \"" +
                                                        std::string(token) + "\"");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = text.find(sep);
    out.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

}  // namespace

RunConfig ExperimentConfig::run_config(std::uint64_t seed) const {
  RunConfig rc{problem, schedule, steps, dist, iterations, lambda0, x0, seed, std::nullopt};
  if (lambda_star) rc.reference = reference_solve(problem, *lambda_star);
  return rc;
}

ExperimentConfig parse_config(const json& doc) {
  try {
    check_keys(doc,
               {"problem", "schedule", "epsilon", "delta", "T", "seeds", "lambda0", "x0", "perturbation",
                "lambda_star", "pareto_lambdas", "output_dir", "workers"},
               "config");
    auto [preset, problem] = parse_problem(require(doc, "problem", "config"));
    auto [schedule_name, schedule] = parse_schedule(require(doc, "schedule", "config"));
    StepSchedule steps(as_real(require(doc, "epsilon", "config"), "epsilon"),
                       as_real(require(doc, "delta", "config"), "delta"));

    ExperimentConfig cfg{std::move(preset), std::move(problem), std::move(schedule_name), std::move(schedule),
                         steps};
    if (doc.contains("perturbation")) cfg.dist = parse_perturbation(doc["perturbation"]);

    const json& t = require(doc, "T", "config");
    if (!t.is_number_integer() || t.get<long long>() < 0) throw ConfigError("T must be a non-negative integer");
    cfg.iterations = t.get<std::size_t>();

    if (doc.contains("seeds")) {
      for (const auto& s : doc["seeds"]) {
        if (!s.is_number_integer() || s.get<long long>() < 0) throw ConfigError("seeds must be non-negative integers");
        cfg.seeds.push_back(s.get<std::uint64_t>());
      }
      if (cfg.seeds.empty()) throw ConfigError("seeds must not be empty");
    } else {
      for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
    }

    cfg.lambda0 = as_reals(require(doc, "lambda0", "config"), "lambda0");
    const std::size_t n = cfg.problem.agents();
    if (doc.contains("x0")) {
      for (const auto& x : doc["x0"]) cfg.x0.push_back(as_point(x, "x0"));
    } else {
      cfg.x0.assign(n, cfg.problem.constraint().anchor());
    }
    if (doc.contains("lambda_star")) cfg.lambda_star = as_real(doc["lambda_star"], "lambda_star");

    if (doc.contains("pareto_lambdas")) {
      cfg.pareto_lambdas = as_reals(doc["pareto_lambdas"], "pareto_lambdas");
    } else {
      for (int i = 1; i <= 9; ++i) cfg.pareto_lambdas.push_back(i / 10.0);
    }
    if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("workers")) {
      cfg.workers = doc["workers"].get<int>();
      if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    }

    if (cfg.pareto_lambdas.empty()) throw ConfigError("pareto_lambdas must not be empty");
    if (cfg.lambda_star && !(*cfg.lambda_star > 0.0 && *cfg.lambda_star < 1.0)) {
      throw ConfigError("lambda_star must lie in (0, 1)");
    }
    // Downstream invariants, checked once before anything runs.
    validate(cfg.run_config(cfg.seeds.front()));
    return cfg;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (std::string_view token : split(text, ',')) {
    if (token.empty()) continue;
    const auto dash = token.find('-');
    if (dash == std::string_view::npos) {
      seeds.push_back(parse_number<std::uint64_t>(token, "seed"));
      continue;
    }
    const auto first = parse_number<std::uint64_t>(token.substr(0, dash), "seed");
    const auto last = parse_number<std::uint64_t>(token.substr(dash + 1), "seed");
    if (last < first) throw ConfigError("seed range " + std::string(token) + " is empty");
    for (std::uint64_t s = first; s <= last; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw ConfigError("seed list is empty");
  return seeds;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> values;
  for (std::string_view token : split(text, ',')) {
    if (!token.empty()) values.push_back(parse_number<double>(token, "number"));
  }
  return values;
}

nlohmann::json five_agent_config_json(std::size_t iterations, std::vector<std::uint64_t> seeds) {
  return {
      {"problem", {{"preset", "five_agent"}}},
      {"schedule", {{"preset", "fig2"}}},
      {"epsilon", 0.125},
      {"delta", 0.25},
      {"T", iterations},
      {"seeds", seeds},
      {"lambda0", {0.1, 0.3, 0.5, 0.7, 0.9}},
      {"x0", {0.0, 0.0, 0.0, 0.0, 0.0}},
  };
}

}  // namespace diop::cli
