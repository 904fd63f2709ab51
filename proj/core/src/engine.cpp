#include "gridalloc/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace gridalloc {

namespace {

std::vector<std::vector<int>> build_adjacency(const std::vector<Edge>& edges, int n) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

}  // namespace

Simulation::Simulation(ProblemInstance instance, std::shared_ptr<EdgeSchedule> schedule,
                       std::uint64_t seed)
    : instance_(std::move(instance)),
      schedule_(std::move(schedule)),
      rng_(seed),
      seed_(seed) {
  const auto report = validate(instance_);
  if (!report.ok) {
    throw std::invalid_argument("simulation: invalid instance: " + report.message);
  }
  if (!schedule_ || schedule_->node_count() != instance_.node_count()) {
    throw std::invalid_argument("simulation: schedule/instance node counts differ");
  }
  expected_y_ = instance_.total_capacity();
  expected_z_ = instance_.total_load() + instance_.total_stored();
  optimal_ratio_ = optimal_ratio(instance_);

  const int n = instance_.node_count();
  const auto adj = build_adjacency(schedule_->edges_at(0), n);
  nodes_.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    nodes_.push_back(NodeState::initialize(instance_, j, n, adj[static_cast<std::size_t>(j)]));
    Message m;
    m.kind = Message::Kind::StateBroadcast;
    m.sender = j;
    m.sent_round = 0;
    m.recipients = adj[static_cast<std::size_t>(j)];
    m.state = nodes_.back().state();
    staged_init_.push_back(std::move(m));
  }
}

void Simulation::set_delivery_filter(std::function<bool(const Message&)> drop) {
  drop_ = std::move(drop);
}

RoundMetrics Simulation::step() {
  const long k = round_;
  const int n = node_count();
  const auto adj = build_adjacency(schedule_->edges_at(k), n);

  // Deliver messages sent in round k-1.
  std::vector<std::vector<MassPair>> inbox_mass(static_cast<std::size_t>(n));
  std::vector<std::vector<StatePair>> inbox_state(static_cast<std::size_t>(n));
  for (const Message& m : pending_) {
    if (drop_ && drop_(m)) continue;
    if (m.kind == Message::Kind::DirectedMass) {
      inbox_mass[static_cast<std::size_t>(m.recipient)].push_back(m.mass);
    } else {
      for (int r : m.recipients) {
        inbox_state[static_cast<std::size_t>(r)].push_back(m.state);
      }
    }
  }
  pending_.clear();

  for (int j = 0; j < n; ++j) {
    nodes_[static_cast<std::size_t>(j)].absorb(inbox_mass[static_cast<std::size_t>(j)]);
  }
  for (int j = 0; j < n; ++j) {
    const bool received = !inbox_mass[static_cast<std::size_t>(j)].empty() ||
                          !inbox_state[static_cast<std::size_t>(j)].empty();
    if (received || k == 0) {
      nodes_[static_cast<std::size_t>(j)].apply_event_triggers(
          inbox_state[static_cast<std::size_t>(j)], adj[static_cast<std::size_t>(j)]);
    }
  }
  for (int j = 0; j < n; ++j) {
    nodes_[static_cast<std::size_t>(j)].new_neighbor_check(adj[static_cast<std::size_t>(j)]);
  }

  // Emission phase; rng is consumed in node-index order.
  std::vector<Message> outgoing;
  if (k == 0) {
    outgoing = std::move(staged_init_);
    staged_init_.clear();
  }
  for (int j = 0; j < n; ++j) {
    Emission e = nodes_[static_cast<std::size_t>(j)].emit(adj[static_cast<std::size_t>(j)], rng_);
    if (e.direct) {
      Message m;
      m.kind = Message::Kind::DirectedMass;
      m.sender = j;
      m.sent_round = k;
      m.recipient = e.direct->target;
      m.mass = e.direct->mass;
      outgoing.push_back(std::move(m));
    }
    if (e.broadcast) {
      Message m;
      m.kind = Message::Kind::StateBroadcast;
      m.sender = j;
      m.sent_round = k;
      m.recipients = adj[static_cast<std::size_t>(j)];
      m.state = e.broadcast->state;
      outgoing.push_back(std::move(m));
    }
  }
  pending_ = std::move(outgoing);
  round_ = k + 1;

  RoundMetrics metrics;
  metrics.round = k;
  for (const Message& m : pending_) {
    if (m.kind == Message::Kind::StateBroadcast) {
      ++metrics.broadcasts;
    } else {
      ++metrics.direct_transmissions;
    }
  }
  metrics.total_mass = conservation_audit();

  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  bool first = true;
  for (const NodeState& node : nodes_) {
    const auto& s = node.state();
    if (same_ratio(s.y_s, s.z_s, expected_y_, expected_z_)) {
      ++metrics.nodes_at_optimum;
    }
    pairs.emplace_back(s.z_s, s.y_s);
    Fraction err = (s.ratio() - optimal_ratio_).abs();
    if (first || metrics.max_state_error < err) {
      metrics.max_state_error = err;
      first = false;
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  metrics.distinct_state_pairs = static_cast<int>(pairs.size());
  return metrics;
}

std::pair<std::vector<int>, MassPair> Simulation::leading_mass() const {
  std::vector<int> holders;
  MassPair best;
  for (const NodeState& node : nodes_) {
    const MassPair& m = node.mass();
    if (m.z <= 0) continue;
    if (holders.empty() || lex_less(best.z, best.y, m.z, m.y)) {
      holders.assign(1, node.id());
      best = m;
    } else if (m.z == best.z && m.y == best.y) {
      holders.push_back(node.id());
    }
  }
  return {holders, best};
}

MassPair Simulation::conservation_audit() const {
  MassPair total;
  for (const NodeState& node : nodes_) total.add(node.mass());
  for (const Message& m : pending_) {
    if (m.kind == Message::Kind::DirectedMass) total.add(m.mass);
  }
  for (const Message& m : staged_init_) {
    if (m.kind == Message::Kind::DirectedMass) total.add(m.mass);
  }
  if (total.y != expected_y_ || total.z != expected_z_) {
    std::string breakdown = "conservation violated: total (" + std::to_string(total.y) + "," +
                            std::to_string(total.z) + ") expected (" +
                            std::to_string(expected_y_) + "," + std::to_string(expected_z_) +
                            "); held:";
    for (const NodeState& node : nodes_) {
      breakdown += " v" + std::to_string(node.id()) + "=(" + std::to_string(node.mass().y) +
                   "," + std::to_string(node.mass().z) + ")";
    }
    breakdown += "; in flight: " + std::to_string(pending_.size()) + " message(s)";
    throw std::logic_error(breakdown);
  }
  return total;
}

TrialResult Simulation::run(const RunOptions& options) {
  if (options.max_rounds < 1) {
    throw std::invalid_argument("run: max_rounds must be >= 1");
  }
  if (options.stall_window < 1) {
    throw std::invalid_argument("run: stall_window must be >= 1");
  }
  TrialResult result;
  result.seed = seed_;

  long last_send = -1;
  std::optional<long> all_at_optimum_since;
  for (long k = 0; k < options.max_rounds; ++k) {
    RoundMetrics m = step();
    if (m.sends() > 0) last_send = m.round;
    if (m.nodes_at_optimum == node_count()) {
      if (!all_at_optimum_since) all_at_optimum_since = m.round;
    } else {
      all_at_optimum_since.reset();
    }
    const bool quiet = m.round - last_send >= options.stall_window;
    result.trace.push_back(std::move(m));
    if (all_at_optimum_since && quiet) {
      result.converged = true;
      result.convergence_round = all_at_optimum_since;
      break;
    }
  }
  result.stop_round = last_send;
  if (result.converged) {
    for (long i = 0; i < options.quiet_check_rounds; ++i) {
      RoundMetrics m = step();
      result.post_stop_messages += m.sends();
      result.trace.push_back(std::move(m));
    }
  }
  result.rounds_run = static_cast<long>(result.trace.size());
  for (const RoundMetrics& m : result.trace) {
    result.total_transmissions += m.sends();
  }
  result.final_ratios.reserve(nodes_.size());
  result.workloads.reserve(nodes_.size());
  for (const NodeState& node : nodes_) {
    const Fraction ratio = node.ratio();
    result.final_ratios.push_back(ratio);
    const auto& res = instance_.node(node.id());
    result.workloads.push_back(Fraction::from_int(res.capacity) / ratio -
                               Fraction::from_int(res.stored));
  }
  return result;
}

TrialResult run_trial(const ProblemInstance& instance, std::shared_ptr<EdgeSchedule> schedule,
                      std::uint64_t seed, const RunOptions& options) {
  Simulation sim(instance, std::move(schedule), seed);
  return sim.run(options);
}

}  // namespace gridalloc
