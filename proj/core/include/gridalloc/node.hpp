#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gridalloc/fraction.hpp"
#include "gridalloc/problem.hpp"
#include "gridalloc/rng.hpp"

namespace gridalloc {

// The integer pair a node holds and routes: y carries memory units, z carries
// data units. (0, 0) is the empty mass. Network-wide sums of y and z are
// conserved by construction: masses only move or merge.
struct MassPair {
  std::int64_t y = 0;
  std::int64_t z = 0;

  bool empty() const { return y == 0 && z == 0; }
  void add(const MassPair& o) {
    y += o.y;
    z += o.z;
  }
  bool operator==(const MassPair& o) const { return y == o.y && z == o.z; }
};

// A node's belief about the greatest mass pair seen so far. z_s starts at 1
// and never decreases; the ratio y_s / z_s is the node's running estimate.
struct StatePair {
  std::int64_t y_s = 0;
  std::int64_t z_s = 1;

  Fraction ratio() const { return Fraction(y_s, z_s); }
  bool operator==(const StatePair& o) const { return y_s == o.y_s && z_s == o.z_s; }
};

// Strict lexicographic order on (z, y).
inline bool lex_less(std::int64_t z1, std::int64_t y1, std::int64_t z2, std::int64_t y2) {
  return z1 < z2 || (z1 == z2 && y1 < y2);
}

// y1/z1 == y2/z2 by cross multiplication (denominators may be zero-free by caller).
inline bool same_ratio(std::int64_t y1, std::int64_t z1, std::int64_t y2, std::int64_t z2) {
  return static_cast<__int128>(y1) * z2 == static_cast<__int128>(y2) * z1;
}

struct DirectedSend {
  int target = -1;  // may equal the sender (virtual self edge)
  MassPair mass;
};

struct BroadcastSend {
  StatePair state;
};

// What a node decided to put on the air this round.
struct Emission {
  std::optional<DirectedSend> direct;
  std::optional<BroadcastSend> broadcast;
};

// Per-node protocol state machine. The engine drives it through
// absorb -> apply_event_triggers -> new_neighbor_check -> emit each round;
// the node itself never sees the network beyond its current neighbor list.
class NodeState {
 public:
  // Mass starts at (capacity, load + stored), state at (capacity, 1). The
  // caller queues the initial state broadcast and passes the round-0
  // neighbors, which seed the remembered set.
  static NodeState initialize(const ProblemInstance& instance, int j, int node_count,
                              const std::vector<int>& neighbors_at_round0);

  int id() const { return id_; }
  const MassPair& mass() const { return mass_; }
  const StatePair& state() const { return state_; }
  Fraction ratio() const { return state_.ratio(); }
  bool broadcast_flag() const { return broadcast_flag_; }
  bool transmit_flag() const { return transmit_flag_; }
  bool remembers(int v) const { return remembered_.at(static_cast<std::size_t>(v)); }
  std::vector<int> remembered_ids() const;

  // Merges every received mass into the held one (sums y's and z's).
  void absorb(const std::vector<MassPair>& received);

  // Runs the five event-trigger condition groups in order against the
  // received state pairs and the held mass:
  //   1. adopt the greatest received state if it beats the own one (lex on
  //      (z, y)) and flag a broadcast;
  //   2. copy the mass into the state if the mass is greater, flag a broadcast;
  //   3. flag a direct transmission if 0 < mass.z and the mass is smaller
  //      than the state;
  //   4. clear the transmission flag if the mass ratio equals the state
  //      ratio (the mass is at rest);
  //   5. if a broadcast was flagged, forget previous recipients: remembered
  //      becomes exactly the current neighbor set.
  void apply_event_triggers(const std::vector<StatePair>& received_states,
                            const std::vector<int>& neighbors);

  // Flags a broadcast when a current neighbor has not seen the current state
  // (neighbors not a subset of remembered), then remembers them all.
  void new_neighbor_check(const std::vector<int>& neighbors);

  // Self or a current neighbor, each with probability 1/(degree+1).
  int select_target(const std::vector<int>& neighbors, Rng& rng) const;

  // Executes the flagged transmissions: a directed mass send to
  // select_target (the held mass is zeroed) and/or a state broadcast.
  // Both flags are clear afterwards.
  Emission emit(const std::vector<int>& neighbors, Rng& rng);

 private:
  int id_ = -1;
  MassPair mass_;
  StatePair state_;
  bool broadcast_flag_ = false;
  bool transmit_flag_ = false;
  std::vector<bool> remembered_;  // S_j, indexed by node id
};

}  // namespace gridalloc
