#include "gridalloc/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gridalloc/rng.hpp"

namespace gridalloc {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) {
    throw ConfigError(path + key, "missing required field");
  }
  return j.at(key);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

InstanceGeneratorSpec parse_instance_generator(const json& j) {
  InstanceGeneratorSpec spec;
  spec.n = require(j, "n", "instance.generator.").get<int>();
  spec.load_min = get_or<std::int64_t>(j, "load_min", 1);
  spec.load_max = get_or<std::int64_t>(j, "load_max", spec.load_min);
  if (j.contains("load_sum")) spec.load_sum = j.at("load_sum").get<std::int64_t>();
  spec.stored_min = get_or<std::int64_t>(j, "stored_min", 0);
  spec.stored_max = get_or<std::int64_t>(j, "stored_max", spec.stored_min);
  spec.seed = get_or<std::uint64_t>(j, "seed", 0);
  if (j.contains("capacity_tiers")) {
    for (const auto& tier : j.at("capacity_tiers")) {
      spec.capacity_tiers.push_back(
          CapacityTier{require(tier, "capacity", "instance.generator.capacity_tiers.").get<std::int64_t>(),
                       require(tier, "count", "instance.generator.capacity_tiers.").get<int>()});
    }
  }
  if (j.contains("capacity")) spec.uniform_capacity = j.at("capacity").get<std::int64_t>();
  return spec;
}

GraphGeneratorSpec parse_graph_generator(const json& j) {
  GraphGeneratorSpec spec;
  spec.model = get_or<std::string>(j, "model", "gnp");
  spec.n = require(j, "n", "graph.generator.").get<int>();
  spec.edge_prob = get_or<double>(j, "edge_prob", 0.2);
  spec.target_diameter = get_or<int>(j, "target_diameter", 0);
  spec.max_attempts = get_or<int>(j, "max_attempts", 2000);
  spec.seed = get_or<std::uint64_t>(j, "seed", 0);
  return spec;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("(file)", std::string("not valid JSON: ") + e.what());
  }
  ExperimentConfig config;
  try {
    const json& instance = require(j, "instance", "");
    if (instance.contains("nodes")) {
      std::vector<NodeResources> nodes;
      for (const auto& node : instance.at("nodes")) {
        NodeResources r;
        r.load = get_or<std::int64_t>(node, "load", 0);
        r.stored = get_or<std::int64_t>(node, "stored", 0);
        r.capacity = require(node, "capacity", "instance.nodes.").get<std::int64_t>();
        nodes.push_back(r);
      }
      config.nodes = std::move(nodes);
    } else if (instance.contains("generator")) {
      config.instance_generator = parse_instance_generator(instance.at("generator"));
    } else {
      throw ConfigError("instance", "needs either \"nodes\" or \"generator\"");
    }

    const json& graph = require(j, "graph", "");
    if (graph.contains("edges")) {
      std::vector<Edge> edges;
      for (const auto& e : graph.at("edges")) {
        if (!e.is_array() || e.size() != 2) {
          throw ConfigError("graph.edges", "each edge must be a [u, v] pair");
        }
        edges.push_back(make_edge(e.at(0).get<int>(), e.at(1).get<int>()));
      }
      config.edges = std::move(edges);
      if (graph.contains("node_count")) config.graph_node_count = graph.at("node_count").get<int>();
    } else if (graph.contains("generator")) {
      config.graph_generator = parse_graph_generator(graph.at("generator"));
    } else {
      throw ConfigError("graph", "needs either \"edges\" or \"generator\"");
    }

    config.window = get_or<int>(j, "window", 1);
    config.extra_activation_prob = get_or<double>(j, "extra_activation_prob", 0.0);

    if (j.contains("trials")) {
      const json& trials = j.at("trials");
      if (trials.contains("seeds")) {
        config.seeds_explicit = true;
        for (const auto& s : trials.at("seeds")) {
          config.seeds.push_back(s.get<std::uint64_t>());
        }
      } else {
        config.trial_count = get_or<int>(trials, "count", 1);
        config.master_seed = get_or<std::uint64_t>(trials, "master_seed", 0);
      }
    }
    if (j.contains("max_rounds")) config.max_rounds = j.at("max_rounds").get<long>();
    if (j.contains("stall_window")) config.stall_window = j.at("stall_window").get<long>();
    config.p0_prime = get_or<double>(j, "p0_prime", 0.9);
    if (j.contains("token_walk")) {
      const json& tw = j.at("token_walk");
      config.token_walk.trials = get_or<long>(tw, "trials", 100000);
      config.token_walk.pairs = get_or<int>(tw, "pairs", 10);
    }
  } catch (const json::exception& e) {
    throw ConfigError("(file)", std::string("bad field type: ") + e.what());
  }
  return config;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("(file)", "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

ProblemInstance generate_instance(const InstanceGeneratorSpec& spec) {
  if (spec.n < 1) {
    throw ConfigError("instance.generator.n", "must be >= 1");
  }
  if (spec.load_min < 0 || spec.load_max < spec.load_min) {
    throw ConfigError("instance.generator.load_min/load_max", "need 0 <= min <= max");
  }
  if (spec.stored_min < 0 || spec.stored_max < spec.stored_min) {
    throw ConfigError("instance.generator.stored_min/stored_max", "need 0 <= min <= max");
  }

  std::vector<std::int64_t> capacities;
  if (!spec.capacity_tiers.empty()) {
    for (const auto& tier : spec.capacity_tiers) {
      if (tier.count < 0 || tier.capacity < 1) {
        throw ConfigError("instance.generator.capacity_tiers", "counts >= 0, capacities >= 1");
      }
      capacities.insert(capacities.end(), static_cast<std::size_t>(tier.count), tier.capacity);
    }
    if (static_cast<int>(capacities.size()) != spec.n) {
      throw ConfigError("instance.generator.capacity_tiers",
                        "tier counts sum to " + std::to_string(capacities.size()) +
                            ", expected n = " + std::to_string(spec.n));
    }
    Rng shuffle_rng = Rng::derive(spec.seed, 3);
    for (std::size_t i = capacities.size(); i > 1; --i) {
      std::swap(capacities[i - 1], capacities[static_cast<std::size_t>(shuffle_rng.below(i))]);
    }
  } else if (spec.uniform_capacity) {
    capacities.assign(static_cast<std::size_t>(spec.n), *spec.uniform_capacity);
  } else {
    throw ConfigError("instance.generator", "needs capacity_tiers or capacity");
  }

  Rng load_rng = Rng::derive(spec.seed, 1);
  std::vector<std::int64_t> loads(static_cast<std::size_t>(spec.n));
  for (auto& l : loads) l = load_rng.range(spec.load_min, spec.load_max);
  if (spec.load_sum) {
    const std::int64_t target = *spec.load_sum;
    if (target < spec.load_min * spec.n || target > spec.load_max * spec.n) {
      throw ConfigError("instance.generator.load_sum",
                        "unreachable with n * [load_min, load_max]");
    }
    std::int64_t sum = std::accumulate(loads.begin(), loads.end(), std::int64_t{0});
    while (sum != target) {
      auto& l = loads[static_cast<std::size_t>(load_rng.below(loads.size()))];
      if (sum > target && l > spec.load_min) {
        --l;
        --sum;
      } else if (sum < target && l < spec.load_max) {
        ++l;
        ++sum;
      }
    }
  }

  Rng stored_rng = Rng::derive(spec.seed, 2);
  std::vector<NodeResources> nodes(static_cast<std::size_t>(spec.n));
  for (int j = 0; j < spec.n; ++j) {
    auto& r = nodes[static_cast<std::size_t>(j)];
    r.load = loads[static_cast<std::size_t>(j)];
    r.stored = stored_rng.range(spec.stored_min, spec.stored_max);
    r.capacity = capacities[static_cast<std::size_t>(j)];
  }
  return ProblemInstance(std::move(nodes));
}

namespace {

NominalGraph resolve_graph(const ExperimentConfig& config, int instance_n) {
  if (config.edges) {
    const int n = config.graph_node_count.value_or(instance_n);
    if (n != instance_n) {
      throw ConfigError("graph.node_count", "differs from the instance node count");
    }
    return NominalGraph(n, *config.edges);
  }
  if (!config.graph_generator) {
    throw ConfigError("graph", "needs either \"edges\" or \"generator\"");
  }
  const GraphGeneratorSpec& g = *config.graph_generator;
  if (g.n != instance_n) {
    throw ConfigError("graph.generator.n", "differs from the instance node count");
  }
  if (g.model == "path") return NominalGraph::path(g.n);
  if (g.model == "cycle") return NominalGraph::cycle(g.n);
  if (g.model == "complete") return NominalGraph::complete(g.n);
  if (g.model == "gnp") {
    return random_connected_graph(g.n, g.edge_prob, g.target_diameter, g.seed, g.max_attempts);
  }
  throw ConfigError("graph.generator.model", "unknown model \"" + g.model + "\"");
}

constexpr long kMaxRoundsCap = 1000000;

}  // namespace

ResolvedExperiment resolve(const ExperimentConfig& config) {
  ProblemInstance instance = config.nodes ? ProblemInstance(*config.nodes)
                                          : generate_instance(*config.instance_generator);
  const ValidationReport report = validate(instance);
  if (!report.ok) {
    throw ConfigError("instance", report.message);
  }

  NominalGraph nominal = resolve_graph(config, instance.node_count());
  if (!nominal.is_connected()) {
    throw ConfigError("graph", "nominal graph must be connected");
  }
  if (config.window < 1) {
    throw ConfigError("window", "must be >= 1");
  }
  if (config.extra_activation_prob < 0.0 || config.extra_activation_prob > 1.0) {
    throw ConfigError("extra_activation_prob", "must lie in [0, 1]");
  }
  if (!(config.p0_prime > 0.0 && config.p0_prime < 1.0)) {
    throw ConfigError("p0_prime", "must lie in (0, 1)");
  }

  std::vector<std::uint64_t> seeds;
  if (config.seeds_explicit) {
    seeds = config.seeds;
    if (seeds.empty()) {
      throw ConfigError("trials.seeds", "must not be empty");
    }
  } else {
    if (config.trial_count < 1) {
      throw ConfigError("trials.count", "must be >= 1");
    }
    for (int t = 0; t < config.trial_count; ++t) {
      seeds.push_back(splitmix64(config.master_seed + static_cast<std::uint64_t>(t)));
    }
  }

  const int n = instance.node_count();
  const int diameter = n > 1 ? nominal.diameter() : 0;
  const int max_degree = nominal.max_degree();

  BigFloat epsilon = 0;
  BigInt tau = 0;
  BigInt bound = 1;
  if (n >= 2) {
    BoundInputs inputs;
    inputs.n = n;
    inputs.window = config.window;
    inputs.union_diameter = diameter;
    inputs.max_degree = max_degree;
    inputs.p0 = config.p0_prime;
    epsilon = epsilon_bound_network(config.p0_prime, n);
    tau = tau_bound(epsilon, inputs);
    bound = convergence_step_bound(n, config.window, diameter, tau);
  }

  long max_rounds;
  if (config.max_rounds) {
    if (*config.max_rounds < 1) {
      throw ConfigError("max_rounds", "must be >= 1");
    }
    max_rounds = *config.max_rounds;
  } else {
    // The analytic bound is astronomically loose; it stays the audit value
    // while the loop cap defaults to something steppable.
    max_rounds = bound < kMaxRoundsCap ? static_cast<long>(bound) : kMaxRoundsCap;
  }
  long stall_window;
  if (config.stall_window) {
    if (*config.stall_window < 1) {
      throw ConfigError("stall_window", "must be >= 1");
    }
    stall_window = *config.stall_window;
  } else {
    stall_window = static_cast<long>(config.window) * diameter + 1;
  }
  const long quiet = static_cast<long>(config.window) * diameter + stall_window;

  if (config.token_walk.trials < 1) {
    throw ConfigError("token_walk.trials", "must be >= 1");
  }
  if (config.token_walk.pairs < 1) {
    throw ConfigError("token_walk.pairs", "must be >= 1");
  }

  return ResolvedExperiment{std::move(instance),
                            std::move(nominal),
                            config.window,
                            config.extra_activation_prob,
                            std::move(seeds),
                            max_rounds,
                            stall_window,
                            quiet,
                            config.p0_prime,
                            diameter,
                            max_degree,
                            std::move(epsilon),
                            std::move(tau),
                            std::move(bound),
                            config.token_walk};
}

}  // namespace gridalloc
