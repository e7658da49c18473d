#include "cli/commands.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include "cli/output.hpp"
#include "cli/verify.hpp"

namespace diop::cli {
namespace {

namespace fs = std::filesystem;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<RunRecord> run_seeds(const ExperimentConfig& config, const std::vector<std::uint64_t>& seeds,
                                 int workers) {
  std::vector<RunRecord> records(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        records[i] = run(config.run_config(seeds[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || seeds.size() == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, seeds.size()); ++t) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

fs::path resolve_output_dir(const std::optional<fs::path>& option, const ExperimentConfig& config) {
  if (option) return *option;
  if (config.output_dir) return *config.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "diop_out";
}

int cmd_run(const fs::path& config_path, const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig config = load_config(config_path);
    const auto seeds = options.seeds.value_or(config.seeds);
    if (seeds.empty()) throw ConfigError("seed list is empty");
    const int workers = options.workers.value_or(config.workers);
    if (workers < 1) throw ConfigError("workers must be >= 1");
    const fs::path dir = resolve_output_dir(options.out_dir, config);
    ensure_dir(dir);

    const std::vector<RunRecord> records = run_seeds(config, seeds, workers);
    for (const RunRecord& r : records) {
      auto csv = open_output(dir / ("trajectory_" + std::to_string(r.seed) + ".csv"));
      write_trajectory_csv(csv, r);
    }
    const SummaryReport report = summarize(config.problem_preset, config.schedule_name, config.problem, records);
    auto summary = open_output(dir / "summary.json");
    summary << to_json(report).dump(2) << '\n';

    out << "ran " << records.size() << " seed(s), T=" << report.iterations << ", output in " << dir.string() << '\n';
    out << "  mean lambda(T) = " << format_real(report.mean_lambda) << ", mean x(T) = [";
    for (Eigen::Index q = 0; q < report.mean_x.size(); ++q) out << (q ? ", " : "") << format_real(report.mean_x[q]);
    out << "]\n";
    for (const auto& [name, ok] : report.checks) out << "  " << (ok ? "pass " : "fail ") << name << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DivergenceError& e) {
    err << "diverged: " << e.what() << '\n';
    return kDiverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int cmd_pareto(const fs::path& config_path, const ParetoOptions& options, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig config = load_config(config_path);
    const auto lambdas = options.lambdas.value_or(config.pareto_lambdas);
    if (lambdas.empty()) throw ConfigError("lambda grid is empty");
    for (double l : lambdas) {
      if (!(l > 0.0 && l < 1.0)) throw ConfigError("lambda grid values must lie strictly inside (0, 1)");
    }
    const fs::path dir = resolve_output_dir(options.out_dir, config);
    ensure_dir(dir);
    const auto front = pareto_sweep(config.problem, lambdas);
    auto csv = open_output(dir / "pareto_front.csv");
    write_pareto_csv(csv, front);
    std::size_t flagged = 0;
    for (const auto& pt : front) flagged += pt.pareto_optimal ? 1 : 0;
    out << "pareto sweep: " << front.size() << " weights, " << flagged << " non-dominated, output in "
        << dir.string() << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int cmd_verify(const std::optional<std::string>& suite, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names;
  if (suite && !suite->empty()) {
    names.push_back(*suite);
  } else {
    names = suite_names();
  }
  std::vector<std::string> failed;
  for (const auto& name : names) {
    SuiteResult result;
    try {
      result = run_suite(name);
    } catch (const std::invalid_argument& e) {
      err << e.what() << '\n';
      return kConfigError;
    }
    out << (result.passed ? "[PASS] " : "[FAIL] ") << result.name << '\n';
    for (const auto& line : result.details) out << "       " << line << '\n';
    if (!result.passed) failed.push_back(result.name);
  }
  if (!failed.empty()) {
    err << "failed suites:";
    for (const auto& f : failed) err << ' ' << f;
    err << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace diop::cli
