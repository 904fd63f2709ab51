#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "gridalloc/experiment.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<long> max_rounds;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--seed", opts.seed, "override the master seed");
  cmd->add_option("--trials", opts.trials, "override the trial count");
  cmd->add_option("--out-dir", opts.out_dir, "output directory (default: out)");
  cmd->add_option("--max-rounds", opts.max_rounds, "override the round cap");
  cmd->add_option("--format", opts.format, "csv|json (default: csv)")
      ->check(CLI::IsMember({"csv", "json"}));
}

gridalloc::ResolvedExperiment load(const CommonOptions& opts) {
  auto config = gridalloc::ExperimentConfig::from_json_file(opts.config_path);
  if (opts.seed) {
    config.seeds_explicit = false;
    config.master_seed = *opts.seed;
  }
  if (opts.trials) {
    config.seeds_explicit = false;
    config.trial_count = *opts.trials;
  }
  if (opts.max_rounds) config.max_rounds = *opts.max_rounds;
  return gridalloc::resolve(config);
}

gridalloc::OutputFormat format_of(const CommonOptions& opts) {
  return opts.format == "json" ? gridalloc::OutputFormat::Json : gridalloc::OutputFormat::Csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantized data-allocation protocol simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts, bounds_opts, walk_opts, validate_opts;
  CLI::App* run = app.add_subcommand("run", "run the configured trials, write round/summary CSVs");
  add_common(run, run_opts);
  CLI::App* bounds = app.add_subcommand(
      "verify-bounds", "check the probabilistic convergence-time bound over seeded trials");
  add_common(bounds, bounds_opts);
  CLI::App* walk = app.add_subcommand(
      "token-walk", "estimate token hitting probabilities against the analytic lower bound");
  add_common(walk, walk_opts);
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check the config, instance and graph; no simulation");
  add_common(validate_cmd, validate_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      run_experiment(load(run_opts), run_opts.out_dir, format_of(run_opts), std::cout);
    } else if (*bounds) {
      const auto v =
          verify_bounds(load(bounds_opts), bounds_opts.out_dir, format_of(bounds_opts), std::cout);
      return v.ok ? 0 : 2;
    } else if (*walk) {
      const auto w =
          token_walk_command(load(walk_opts), walk_opts.out_dir, format_of(walk_opts), std::cout);
      return w.report.all_ok ? 0 : 2;
    } else if (*validate_cmd) {
      const auto experiment = load(validate_opts);
      const auto report = gridalloc::validate(experiment.instance);
      std::cout << "instance: " << experiment.instance.node_count() << " node(s), total load "
                << report.total_load << ", stored " << report.total_stored << ", capacity "
                << report.total_capacity << " (available " << report.available_memory << ")\n";
      std::cout << "graph: " << experiment.nominal.edges().size() << " edge(s), diameter "
                << experiment.union_diameter << ", max degree " << experiment.max_degree
                << ", window " << experiment.window << "\n";
      std::cout << "optimal z: " << optimal_z(experiment.instance).str()
                << ", optimal ratio: " << optimal_ratio(experiment.instance).str() << "\n";
      std::cout << "analytic step bound (p0' = " << experiment.p0_prime
                << "): " << experiment.analytic_bound.str() << "\n";
      std::cout << "config ok\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
