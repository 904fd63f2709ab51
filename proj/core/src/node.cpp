#include "gridalloc/node.hpp"

#include <stdexcept>

namespace gridalloc {

NodeState NodeState::initialize(const ProblemInstance& instance, int j, int node_count,
                                const std::vector<int>& neighbors_at_round0) {
  NodeState n;
  n.id_ = j;
  n.mass_ = MassPair{instance.node(j).capacity, instance.demand(j)};
  n.state_ = StatePair{instance.node(j).capacity, 1};
  n.remembered_.assign(static_cast<std::size_t>(node_count), false);
  for (int v : neighbors_at_round0) {
    n.remembered_.at(static_cast<std::size_t>(v)) = true;
  }
  return n;
}

std::vector<int> NodeState::remembered_ids() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < remembered_.size(); ++v) {
    if (remembered_[v]) out.push_back(static_cast<int>(v));
  }
  return out;
}

void NodeState::absorb(const std::vector<MassPair>& received) {
  for (const MassPair& m : received) {
    mass_.add(m);
  }
}

void NodeState::apply_event_triggers(const std::vector<StatePair>& received_states,
                                     const std::vector<int>& neighbors) {
  // 1: adopt the greatest received state.
  if (!received_states.empty()) {
    StatePair best = received_states.front();
    for (const StatePair& s : received_states) {
      if (lex_less(best.z_s, best.y_s, s.z_s, s.y_s)) best = s;
    }
    if (lex_less(state_.z_s, state_.y_s, best.z_s, best.y_s)) {
      state_ = best;
      broadcast_flag_ = true;
    }
  }
  // 2: the held mass overtakes the state.
  if (lex_less(state_.z_s, state_.y_s, mass_.z, mass_.y)) {
    state_ = StatePair{mass_.y, mass_.z};
    broadcast_flag_ = true;
  }
  // 3: a nonzero mass behind the state keeps walking.
  if (mass_.z > 0 && lex_less(mass_.z, mass_.y, state_.z_s, state_.y_s)) {
    transmit_flag_ = true;
  }
  // 4: equal ratios put the mass at rest, overriding 3.
  if (mass_.z > 0 && same_ratio(mass_.y, mass_.z, state_.y_s, state_.z_s)) {
    transmit_flag_ = false;
  }
  // 5: a new state value voids the old recipient memory.
  if (broadcast_flag_) {
    remembered_.assign(remembered_.size(), false);
    for (int v : neighbors) {
      remembered_.at(static_cast<std::size_t>(v)) = true;
    }
  }
}

void NodeState::new_neighbor_check(const std::vector<int>& neighbors) {
  bool unseen = false;
  for (int v : neighbors) {
    if (!remembered_.at(static_cast<std::size_t>(v))) {
      unseen = true;
      break;
    }
  }
  if (!unseen) return;
  broadcast_flag_ = true;
  for (int v : neighbors) {
    remembered_[static_cast<std::size_t>(v)] = true;
  }
}

int NodeState::select_target(const std::vector<int>& neighbors, Rng& rng) const {
  const auto pick = rng.below(neighbors.size() + 1);
  return pick == 0 ? id_ : neighbors[static_cast<std::size_t>(pick - 1)];
}

Emission NodeState::emit(const std::vector<int>& neighbors, Rng& rng) {
  Emission out;
  if (transmit_flag_) {
    if (mass_.z <= 0) {
      throw std::logic_error("emit: transmit flag set without a nonzero mass");
    }
    out.direct = DirectedSend{select_target(neighbors, rng), mass_};
    mass_ = MassPair{};
    transmit_flag_ = false;
  }
  if (broadcast_flag_) {
    out.broadcast = BroadcastSend{state_};
    broadcast_flag_ = false;
  }
  return out;
}

}  // namespace gridalloc
