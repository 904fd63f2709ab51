#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridalloc/analysis.hpp"
#include "gridalloc/graph.hpp"
#include "gridalloc/problem.hpp"

namespace gridalloc {

// Configuration problem: a named field failed to parse or resolve.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config: " + field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct CapacityTier {
  std::int64_t capacity = 1;
  int count = 0;
};

struct InstanceGeneratorSpec {
  int n = 0;
  std::int64_t load_min = 1;
  std::int64_t load_max = 1;
  std::optional<std::int64_t> load_sum;  // exact target; loads repaired within [min, max]
  std::int64_t stored_min = 0;
  std::int64_t stored_max = 0;
  std::vector<CapacityTier> capacity_tiers;      // shuffled over nodes; counts must sum to n
  std::optional<std::int64_t> uniform_capacity;  // alternative to tiers
  std::uint64_t seed = 0;
};

struct GraphGeneratorSpec {
  std::string model = "gnp";  // gnp | path | cycle | complete
  int n = 0;
  double edge_prob = 0.2;
  int target_diameter = 0;  // 0 = unconstrained
  int max_attempts = 2000;
  std::uint64_t seed = 0;
};

struct TokenWalkSpec {
  long trials = 100000;
  int pairs = 10;
};

// Parsed experiment file; `resolve` turns it into concrete objects. Exactly
// one of {nodes, instance_generator} and one of {edges, graph_generator}
// must be present.
struct ExperimentConfig {
  std::optional<std::vector<NodeResources>> nodes;
  std::optional<InstanceGeneratorSpec> instance_generator;

  std::optional<std::vector<Edge>> edges;
  std::optional<int> graph_node_count;
  std::optional<GraphGeneratorSpec> graph_generator;

  int window = 1;
  double extra_activation_prob = 0.0;

  bool seeds_explicit = false;
  std::vector<std::uint64_t> seeds;  // used when seeds_explicit
  int trial_count = 1;
  std::uint64_t master_seed = 0;

  std::optional<long> max_rounds;
  std::optional<long> stall_window;
  double p0_prime = 0.9;
  TokenWalkSpec token_walk;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

// Everything a command needs, fully materialized and validated.
struct ResolvedExperiment {
  ProblemInstance instance;
  NominalGraph nominal;
  int window;
  double extra_activation_prob;
  std::vector<std::uint64_t> seeds;
  long max_rounds;
  long stall_window;
  long quiet_check_rounds;
  double p0_prime;
  int union_diameter;  // 0 for a single node
  int max_degree;
  BigFloat epsilon;     // per-merge failure budget for p0_prime
  BigInt tau;           // windows per merge phase
  BigInt analytic_bound;  // convergence_step_bound; max_rounds caps at 10^6
  TokenWalkSpec token_walk;
};

ProblemInstance generate_instance(const InstanceGeneratorSpec& spec);

ResolvedExperiment resolve(const ExperimentConfig& config);

}  // namespace gridalloc
