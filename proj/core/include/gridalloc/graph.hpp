#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gridalloc/rng.hpp"

namespace gridalloc {

// Undirected edge, stored canonically with first < second.
using Edge = std::pair<int, int>;

Edge make_edge(int a, int b);  // throws on a == b or negative index

// Simple undirected graph on nodes 0..n-1, no self loops. Connectivity is a
// property callers check where they need it, not a constructor invariant
// (union graphs of arbitrary edge-set lists may be disconnected).
class NominalGraph {
 public:
  NominalGraph(int node_count, std::vector<Edge> edges);

  static NominalGraph path(int n);
  static NominalGraph cycle(int n);
  static NominalGraph complete(int n);

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_.at(v); }
  int degree(int v) const { return static_cast<int>(adjacency_.at(v).size()); }
  int max_degree() const;
  bool has_edge(int a, int b) const;

  bool is_connected() const;
  // Longest shortest path; throws std::invalid_argument if disconnected.
  int diameter() const;

 private:
  int node_count_;
  std::vector<Edge> edges_;                   // sorted, unique
  std::vector<std::vector<int>> adjacency_;   // sorted per node
};

NominalGraph union_graph(const std::vector<std::vector<Edge>>& edge_sets, int node_count);

// Supplies the edge set for any round index. Implementations must be
// deterministic: querying the same round twice returns the same edges.
class EdgeSchedule {
 public:
  virtual ~EdgeSchedule() = default;
  virtual int node_count() const = 0;
  virtual const std::vector<Edge>& edges_at(long round) = 0;

  // Sorted neighbor list of `node` in round `round`.
  std::vector<int> neighbors_at(int node, long round);
};

// The nominal graph active in every round.
class StaticSchedule final : public EdgeSchedule {
 public:
  explicit StaticSchedule(NominalGraph graph) : graph_(std::move(graph)) {}
  int node_count() const override { return graph_.node_count(); }
  const std::vector<Edge>& edges_at(long) override { return graph_.edges(); }

 private:
  NominalGraph graph_;
};

// Lazy per-round edge process over fixed windows of `window` rounds: inside
// each window every nominal edge is active in one uniformly chosen round,
// and independently in any round with probability extra_activation_prob.
// Round k depends only on (seed, k / window), so any prefix of the process
// matches a materialized sequence generated from the same seed.
class WindowedSchedule final : public EdgeSchedule {
 public:
  WindowedSchedule(NominalGraph nominal, int window, double extra_activation_prob,
                   std::uint64_t seed);
  int node_count() const override { return nominal_.node_count(); }
  const std::vector<Edge>& edges_at(long round) override;

  const NominalGraph& nominal() const { return nominal_; }
  int window() const { return window_; }

 private:
  void materialize_window(long window_index);

  NominalGraph nominal_;
  int window_;
  double extra_activation_prob_;
  std::uint64_t seed_;
  long cached_window_ = -1;
  std::vector<std::vector<Edge>> cache_;
};

// A materialized per-round edge sequence over a nominal graph, with fixed
// window boundaries t_m = m * window.
class DynamicGraphSequence {
 public:
  DynamicGraphSequence(NominalGraph nominal, int window, std::vector<std::vector<Edge>> rounds);

  const NominalGraph& nominal() const { return nominal_; }
  int window() const { return window_; }
  long round_count() const { return static_cast<long>(rounds_.size()); }
  const std::vector<Edge>& edges_at(long k) const;   // throws std::out_of_range
  std::vector<int> neighbors(int node, long k) const;
  std::vector<long> boundary_instants() const;       // 0, window, 2*window, ...

 private:
  NominalGraph nominal_;
  int window_;
  std::vector<std::vector<Edge>> rounds_;
};

// Adapter so the engine can run over a materialized sequence.
class SequenceSchedule final : public EdgeSchedule {
 public:
  explicit SequenceSchedule(DynamicGraphSequence seq) : seq_(std::move(seq)) {}
  int node_count() const override { return seq_.nominal().node_count(); }
  const std::vector<Edge>& edges_at(long round) override { return seq_.edges_at(round); }

 private:
  DynamicGraphSequence seq_;
};

struct JointConnectivityReport {
  bool ok = false;
  long first_bad_window = -1;  // -1 when ok or when the nominal graph itself fails
  std::string message;
};

// True iff the nominal graph is connected and the union of every complete
// window of `window` rounds equals the nominal edge set (a trailing partial
// window is not checked). Also rejects rounds with edges outside the nominal set.
JointConnectivityReport verify_jointly_connected(const DynamicGraphSequence& seq);

// Materializes `rounds` rounds of the WindowedSchedule process.
DynamicGraphSequence generate_sequence(const NominalGraph& nominal, int window, long rounds,
                                       double extra_activation_prob, std::uint64_t seed);

// Random-graph construction used by experiment configs. Resamples until the
// graph is connected and (when target_diameter is set) hits that diameter.
NominalGraph random_connected_graph(int n, double edge_prob, int target_diameter,
                                    std::uint64_t seed, int max_attempts);

}  // namespace gridalloc
