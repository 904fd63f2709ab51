#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "gridalloc/fraction.hpp"
#include "gridalloc/graph.hpp"
#include "gridalloc/node.hpp"
#include "gridalloc/problem.hpp"
#include "gridalloc/rng.hpp"

namespace gridalloc {

// A transmission in flight. Messages sent in round k are processed by their
// recipients in round k+1; recipients are fixed at send time from E[k].
struct Message {
  enum class Kind { StateBroadcast, DirectedMass };

  Kind kind = Kind::StateBroadcast;
  int sender = -1;
  long sent_round = 0;
  std::vector<int> recipients;  // broadcast: the sender's neighbors at send time
  int recipient = -1;           // directed: chosen target (possibly the sender)
  StatePair state;              // broadcast payload
  MassPair mass;                // directed payload
};

struct RoundMetrics {
  long round = 0;
  long broadcasts = 0;            // broadcast sends this round
  long direct_transmissions = 0;  // directed sends this round (self targets count)
  int nodes_at_optimum = 0;       // state ratio equals nu_max/(mu+delta_tot)
  MassPair total_mass;            // held + in flight, audited every round
  int distinct_state_pairs = 0;
  Fraction max_state_error;       // max over nodes of |ratio - optimal ratio|

  long sends() const { return broadcasts + direct_transmissions; }
};

struct RunOptions {
  long max_rounds = 100000;
  // Consecutive silent rounds (with every node at the optimum) that close a
  // trial. Callers use window * diameter + 1 unless configured otherwise.
  long stall_window = 1;
  // Extra rounds stepped after detection; any send observed there is
  // reported in TrialResult::post_stop_messages.
  long quiet_check_rounds = 0;
};

struct TrialResult {
  std::uint64_t seed = 0;
  bool converged = false;
  std::optional<long> convergence_round;  // first round from which all nodes stayed at optimum
  long stop_round = -1;                   // last round with any send
  long rounds_run = 0;
  long total_transmissions = 0;
  long post_stop_messages = 0;
  std::vector<Fraction> final_ratios;  // per-node state ratio at the end
  std::vector<Fraction> workloads;     // capacity_j / ratio_j - stored_j
  std::vector<RoundMetrics> trace;
};

// Synchronous round-based simulator for one trial. Strictly sequential and
// deterministic given (instance, schedule, seed); nothing is shared between
// Simulation objects, so independent trials may run on separate threads.
class Simulation {
 public:
  Simulation(ProblemInstance instance, std::shared_ptr<EdgeSchedule> schedule,
             std::uint64_t seed);

  // Executes the next round: deliver last round's messages, evaluate the
  // event triggers (guarded on receipt; round 0 runs unguarded since
  // initialization itself is the triggering event), run the new-neighbor
  // check, then emit. Audits conservation before returning.
  RoundMetrics step();

  TrialResult run(const RunOptions& options);

  long round() const { return round_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const NodeState& node(int j) const { return nodes_.at(static_cast<std::size_t>(j)); }
  const ProblemInstance& instance() const { return instance_; }
  const std::vector<Message>& in_flight() const { return pending_; }
  const Fraction& optimal() const { return optimal_ratio_; }

  // Greatest (z, y) mass among nodes currently holding z > 0, with every
  // holder on a tie. Diagnostic only; the protocol never reads this.
  std::pair<std::vector<int>, MassPair> leading_mass() const;

  // Sums held plus in-flight mass; throws std::logic_error with a per-node
  // breakdown if the totals drifted from (nu_max, mu + delta_tot).
  MassPair conservation_audit() const;

  // Test fixture: drop in-flight messages for which `drop` returns true.
  // Real channels are reliable; this exists to prove the audit catches loss.
  void set_delivery_filter(std::function<bool(const Message&)> drop);

 private:
  ProblemInstance instance_;
  std::shared_ptr<EdgeSchedule> schedule_;
  Rng rng_;
  std::uint64_t seed_;
  std::vector<NodeState> nodes_;
  std::vector<Message> pending_;       // sent in round round_ - 1
  std::vector<Message> staged_init_;   // initial state broadcasts, sent in round 0
  long round_ = 0;
  std::int64_t expected_y_ = 0;  // nu_max
  std::int64_t expected_z_ = 0;  // mu + delta_tot
  Fraction optimal_ratio_;
  std::function<bool(const Message&)> drop_;
};

// Convenience wrapper: fresh Simulation, full run.
TrialResult run_trial(const ProblemInstance& instance, std::shared_ptr<EdgeSchedule> schedule,
                      std::uint64_t seed, const RunOptions& options);

}  // namespace gridalloc
