#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gridalloc/config.hpp"
#include "gridalloc/engine.hpp"

namespace gridalloc {

enum class OutputFormat { Csv, Json };

struct ExperimentOutputs {
  std::vector<TrialResult> trials;
  std::vector<std::filesystem::path> files;
};

// Runs every configured trial and writes the artifacts:
//   csv:  rounds_<seed>.csv per trial (round, broadcasts, direct_transmissions,
//         cumulative_transmissions, nodes_at_optimum, max_abs_state_error)
//         plus summary.csv (seed, converged, convergence_round, total_transmissions)
//   json: report.json carrying the same data.
// The human-readable report (per-node workloads as exact fractions, trial
// summary) goes to `report`.
ExperimentOutputs run_experiment(const ResolvedExperiment& experiment,
                                 const std::filesystem::path& out_dir, OutputFormat format,
                                 std::ostream& report);

struct BoundsVerification {
  BigFloat epsilon;
  BigInt tau;
  BigInt bound;
  long trials = 0;
  long converged = 0;
  long within_bound = 0;
  double success_fraction = 0.0;
  double margin = 0.0;  // 3 sigma binomial margin at p0'
  bool ok = false;      // success_fraction >= p0' - margin
  std::vector<long> convergence_rounds;  // -1 where not converged
  std::vector<std::filesystem::path> files;
};

// Computes epsilon, tau and the step bound for the configured network, runs
// the configured trials, and checks the observed success fraction against
// p0' minus a 3 sigma margin. Writes bound_trials.csv (or report JSON).
BoundsVerification verify_bounds(const ResolvedExperiment& experiment,
                                 const std::filesystem::path& out_dir, OutputFormat format,
                                 std::ostream& report);

struct TokenWalkOutputs {
  Lemma1Report report;
  std::vector<std::filesystem::path> files;
};

// Runs the hitting-probability check over the configured sequence and writes
// the per-pair margin table (token_walk.csv or JSON).
TokenWalkOutputs token_walk_command(const ResolvedExperiment& experiment,
                                    const std::filesystem::path& out_dir, OutputFormat format,
                                    std::ostream& report);

// One configured trial, no files. Trial index selects the seed.
TrialResult run_single_trial(const ResolvedExperiment& experiment, std::size_t trial_index);

}  // namespace gridalloc
