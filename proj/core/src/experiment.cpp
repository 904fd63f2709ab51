#include "gridalloc/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>

namespace gridalloc {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);  // LF endings everywhere
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

std::string fixed(double v, int digits = 8) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::shared_ptr<EdgeSchedule> trial_schedule(const ResolvedExperiment& e, std::uint64_t seed) {
  if (e.instance.node_count() == 1) {
    return std::make_shared<StaticSchedule>(e.nominal);
  }
  return std::make_shared<WindowedSchedule>(e.nominal, e.window, e.extra_activation_prob,
                                            Rng::derive(seed, 2).next());
}

TrialResult run_one(const ResolvedExperiment& e, std::uint64_t seed) {
  RunOptions options;
  options.max_rounds = e.max_rounds;
  options.stall_window = e.stall_window;
  options.quiet_check_rounds = e.quiet_check_rounds;
  return run_trial(e.instance, trial_schedule(e, seed), Rng::derive(seed, 1).next(), options);
}

void write_rounds_csv(const fs::path& path, const TrialResult& trial) {
  auto out = open_out(path);
  out << "round,broadcasts,direct_transmissions,cumulative_transmissions,"
         "nodes_at_optimum,max_abs_state_error\n";
  long cumulative = 0;
  for (const RoundMetrics& m : trial.trace) {
    cumulative += m.sends();
    out << m.round << ',' << m.broadcasts << ',' << m.direct_transmissions << ',' << cumulative
        << ',' << m.nodes_at_optimum << ',' << m.max_state_error.str() << '\n';
  }
}

void write_summary_csv(const fs::path& path, const std::vector<TrialResult>& trials) {
  auto out = open_out(path);
  out << "seed,converged,convergence_round,total_transmissions\n";
  for (const TrialResult& t : trials) {
    out << t.seed << ',' << (t.converged ? "true" : "false") << ',';
    if (t.convergence_round) out << *t.convergence_round;
    out << ',' << t.total_transmissions << '\n';
  }
}

nlohmann::json trial_to_json(const TrialResult& t, bool with_trace) {
  nlohmann::json j;
  j["seed"] = t.seed;
  j["converged"] = t.converged;
  if (t.convergence_round) {
    j["convergence_round"] = *t.convergence_round;
  } else {
    j["convergence_round"] = nullptr;
  }
  j["stop_round"] = t.stop_round;
  j["rounds_run"] = t.rounds_run;
  j["total_transmissions"] = t.total_transmissions;
  j["post_stop_messages"] = t.post_stop_messages;
  j["final_ratios"] = nlohmann::json::array();
  for (const Fraction& f : t.final_ratios) j["final_ratios"].push_back(f.str());
  j["workloads"] = nlohmann::json::array();
  for (const Fraction& f : t.workloads) j["workloads"].push_back(f.str());
  if (with_trace) {
    nlohmann::json trace = nlohmann::json::array();
    long cumulative = 0;
    for (const RoundMetrics& m : t.trace) {
      cumulative += m.sends();
      trace.push_back({{"round", m.round},
                       {"broadcasts", m.broadcasts},
                       {"direct_transmissions", m.direct_transmissions},
                       {"cumulative_transmissions", cumulative},
                       {"nodes_at_optimum", m.nodes_at_optimum},
                       {"max_abs_state_error", m.max_state_error.str()}});
    }
    j["rounds"] = std::move(trace);
  }
  return j;
}

long median_round(std::vector<long> rounds) {
  if (rounds.empty()) return -1;
  std::sort(rounds.begin(), rounds.end());
  return rounds[rounds.size() / 2];
}

}  // namespace

TrialResult run_single_trial(const ResolvedExperiment& experiment, std::size_t trial_index) {
  return run_one(experiment, experiment.seeds.at(trial_index));
}

ExperimentOutputs run_experiment(const ResolvedExperiment& experiment, const fs::path& out_dir,
                                 OutputFormat format, std::ostream& report) {
  fs::create_directories(out_dir);
  ExperimentOutputs outputs;
  outputs.trials.reserve(experiment.seeds.size());
  for (std::uint64_t seed : experiment.seeds) {
    outputs.trials.push_back(run_one(experiment, seed));
  }

  if (format == OutputFormat::Csv) {
    for (const TrialResult& t : outputs.trials) {
      const fs::path path = out_dir / ("rounds_" + std::to_string(t.seed) + ".csv");
      write_rounds_csv(path, t);
      outputs.files.push_back(path);
    }
    const fs::path summary = out_dir / "summary.csv";
    write_summary_csv(summary, outputs.trials);
    outputs.files.push_back(summary);
  } else {
    nlohmann::json j;
    j["analytic_bound"] = experiment.analytic_bound.str();
    j["union_diameter"] = experiment.union_diameter;
    j["max_degree"] = experiment.max_degree;
    j["trials"] = nlohmann::json::array();
    for (const TrialResult& t : outputs.trials) {
      j["trials"].push_back(trial_to_json(t, true));
    }
    const fs::path path = out_dir / "report.json";
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    outputs.files.push_back(path);
  }

  long converged = 0;
  std::vector<long> rounds;
  for (const TrialResult& t : outputs.trials) {
    if (t.converged) {
      ++converged;
      rounds.push_back(*t.convergence_round);
    }
  }
  report << "trials: " << outputs.trials.size() << ", converged: " << converged
         << ", median convergence round: " << median_round(rounds) << "\n";
  report << "analytic step bound (p0' = " << experiment.p0_prime
         << "): " << experiment.analytic_bound.str() << "\n";

  // Workloads as computed by the protocol (identical across converged trials).
  const TrialResult& shown = outputs.trials.front();
  report << "per-node workloads from seed " << shown.seed << ":\n";
  for (int j = 0; j < experiment.instance.node_count(); ++j) {
    const auto& n = experiment.instance.node(j);
    report << "  v" << j << " capacity=" << n.capacity << " stored=" << n.stored
           << " load=" << n.load << "  w*=" << shown.workloads[static_cast<std::size_t>(j)].str()
           << "\n";
  }
  return outputs;
}

BoundsVerification verify_bounds(const ResolvedExperiment& experiment, const fs::path& out_dir,
                                 OutputFormat format, std::ostream& report) {
  fs::create_directories(out_dir);
  BoundsVerification v;
  v.epsilon = experiment.epsilon;
  v.tau = experiment.tau;
  v.bound = experiment.analytic_bound;
  v.trials = static_cast<long>(experiment.seeds.size());

  std::vector<TrialResult> trials;
  trials.reserve(experiment.seeds.size());
  for (std::uint64_t seed : experiment.seeds) {
    trials.push_back(run_one(experiment, seed));
  }
  for (const TrialResult& t : trials) {
    long round = -1;
    bool within = false;
    if (t.converged) {
      ++v.converged;
      round = *t.convergence_round;
      within = BigInt(round) <= v.bound;
      if (within) ++v.within_bound;
    }
    v.convergence_rounds.push_back(round);
  }
  v.success_fraction = static_cast<double>(v.within_bound) / static_cast<double>(v.trials);
  v.margin = 3.0 * std::sqrt(experiment.p0_prime * (1.0 - experiment.p0_prime) /
                             static_cast<double>(v.trials));
  v.ok = v.success_fraction >= experiment.p0_prime - v.margin;

  if (format == OutputFormat::Csv) {
    const fs::path path = out_dir / "bound_trials.csv";
    auto out = open_out(path);
    out << "seed,converged,convergence_round,within_bound\n";
    for (std::size_t i = 0; i < trials.size(); ++i) {
      const TrialResult& t = trials[i];
      out << t.seed << ',' << (t.converged ? "true" : "false") << ',';
      if (t.convergence_round) out << *t.convergence_round;
      out << ',' << (v.convergence_rounds[i] >= 0 && BigInt(v.convergence_rounds[i]) <= v.bound
                         ? "true"
                         : "false")
          << '\n';
    }
    v.files.push_back(path);
  } else {
    nlohmann::json j;
    j["epsilon"] = v.epsilon.str(12);
    j["tau"] = v.tau.str();
    j["bound"] = v.bound.str();
    j["trials"] = v.trials;
    j["within_bound"] = v.within_bound;
    j["success_fraction"] = v.success_fraction;
    j["margin"] = v.margin;
    j["ok"] = v.ok;
    j["convergence_rounds"] = v.convergence_rounds;
    const fs::path path = out_dir / "bound_report.json";
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    v.files.push_back(path);
  }

  std::vector<long> rounds;
  for (long r : v.convergence_rounds) {
    if (r >= 0) rounds.push_back(r);
  }
  report << "epsilon = " << v.epsilon.str(6) << ", tau = " << v.tau.str()
         << ", step bound = " << v.bound.str() << "\n";
  report << "trials: " << v.trials << ", converged: " << v.converged
         << ", within bound: " << v.within_bound << " (fraction " << fixed(v.success_fraction, 4)
         << ", need >= " << fixed(experiment.p0_prime - v.margin, 4) << ")\n";
  report << "median convergence round: " << median_round(rounds) << ", verdict: "
         << (v.ok ? "PASS" : "FAIL") << "\n";
  return v;
}

TokenWalkOutputs token_walk_command(const ResolvedExperiment& experiment, const fs::path& out_dir,
                                    OutputFormat format, std::ostream& report) {
  fs::create_directories(out_dir);
  const long horizon = static_cast<long>(experiment.window) *
                       std::max(1, experiment.union_diameter);
  const DynamicGraphSequence seq =
      generate_sequence(experiment.nominal, experiment.window, horizon,
                        experiment.extra_activation_prob, Rng::derive(experiment.seeds.front(), 4).next());
  TokenWalkOutputs outputs;
  outputs.report = verify_lemma1(seq, experiment.token_walk.trials, experiment.token_walk.pairs,
                                 Rng::derive(experiment.seeds.front(), 5).next());

  if (format == OutputFormat::Csv) {
    const fs::path path = out_dir / "token_walk.csv";
    auto out = open_out(path);
    out << "start,target,trials,hits,estimate,sigma,bound,pass\n";
    for (const PairMarginRow& row : outputs.report.rows) {
      out << row.start << ',' << row.target << ',' << row.trials << ',' << row.hits << ','
          << fixed(row.estimate) << ',' << fixed(row.sigma) << ',' << row.bound.str() << ','
          << (row.ok ? "true" : "false") << '\n';
    }
    outputs.files.push_back(path);
  } else {
    nlohmann::json j;
    j["horizon"] = outputs.report.horizon;
    j["bound"] = outputs.report.bound.str();
    j["all_ok"] = outputs.report.all_ok;
    j["pairs"] = nlohmann::json::array();
    for (const PairMarginRow& row : outputs.report.rows) {
      j["pairs"].push_back({{"start", row.start},
                            {"target", row.target},
                            {"trials", row.trials},
                            {"hits", row.hits},
                            {"estimate", row.estimate},
                            {"sigma", row.sigma},
                            {"bound", row.bound.str()},
                            {"pass", row.ok}});
    }
    const fs::path path = out_dir / "token_walk.json";
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    outputs.files.push_back(path);
  }

  report << "walk horizon: " << outputs.report.horizon
         << " rounds, analytic bound: " << outputs.report.bound.str() << " ("
         << fixed(outputs.report.bound.to_double(), 6) << ")\n";
  for (const PairMarginRow& row : outputs.report.rows) {
    report << "  " << row.start << " -> " << row.target << ": estimate " << fixed(row.estimate, 5)
           << " sigma " << fixed(row.sigma, 5) << " " << (row.ok ? "ok" : "VIOLATION") << "\n";
  }
  report << (outputs.report.all_ok ? "all pairs satisfy the bound\n"
                                   : "bound violated for at least one pair\n");
  return outputs;
}

}  // namespace gridalloc
