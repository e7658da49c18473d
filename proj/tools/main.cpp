#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace diop::cli;
  CLI::App app{"Distributed interval optimization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string seeds;
  int workers = 0;
  auto* run = app.add_subcommand("run", "Run every seed of a config and write trajectories and a summary");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seeds", seeds, "Seed override, e.g. 1,2,5-9");
  run->add_option("--workers", workers, "Seeds run concurrently")->check(CLI::PositiveNumber);

  std::string lambdas;
  auto* pareto = app.add_subcommand("pareto", "Sweep scalarization weights and write the Pareto front");
  pareto->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  pareto->add_option("--out", out_dir, "Output directory");
  pareto->add_option("--lambdas", lambdas, "Weight grid override, e.g. 0.1,0.5,0.9");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run the built-in property suites");
  verify->add_option("--suite", suite, "Run a single suite")
      ->check(CLI::IsMember({"projection", "mixing", "estimator", "moments", "schedule"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      RunOptions opts;
      if (!out_dir.empty()) opts.out_dir = out_dir;
      if (!seeds.empty()) opts.seeds = parse_seed_list(seeds);
      if (workers > 0) opts.workers = workers;
      return cmd_run(config_path, opts, std::cout, std::cerr);
    }
    if (pareto->parsed()) {
      ParetoOptions opts;
      if (!out_dir.empty()) opts.out_dir = out_dir;
      if (pareto->count("--lambdas") > 0) opts.lambdas = parse_real_list(lambdas);
      return cmd_pareto(config_path, opts, std::cout, std::cerr);
    }
    return cmd_verify(suite.empty() ? std::nullopt : std::optional<std::string>(suite), std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}
