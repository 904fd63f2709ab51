#include "gridalloc/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace gridalloc {

Edge make_edge(int a, int b) {
  if (a == b) {
    throw std::invalid_argument("edge: self loops are not allowed");
  }
  if (a < 0 || b < 0) {
    throw std::invalid_argument("edge: negative node index");
  }
  return a < b ? Edge{a, b} : Edge{b, a};
}

NominalGraph::NominalGraph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count) {
  if (node_count <= 0) {
    throw std::invalid_argument("graph: node_count must be positive");
  }
  edges_.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    Edge e = make_edge(a, b);
    if (e.second >= node_count_) {
      throw std::invalid_argument("graph: edge endpoint out of range");
    }
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  adjacency_.assign(static_cast<std::size_t>(node_count_), {});
  for (const auto& [a, b] : edges_) {
    adjacency_[static_cast<std::size_t>(a)].push_back(b);
    adjacency_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end());
  }
}

NominalGraph NominalGraph::path(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return NominalGraph(n, std::move(edges));
}

NominalGraph NominalGraph::cycle(int n) {
  if (n < 3) {
    throw std::invalid_argument("cycle: needs at least 3 nodes");
  }
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  edges.push_back({0, n - 1});
  return NominalGraph(n, std::move(edges));
}

NominalGraph NominalGraph::complete(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  return NominalGraph(n, std::move(edges));
}

int NominalGraph::max_degree() const {
  int best = 0;
  for (int v = 0; v < node_count_; ++v) best = std::max(best, degree(v));
  return best;
}

bool NominalGraph::has_edge(int a, int b) const {
  if (a == b) return false;
  const auto& list = adjacency_.at(static_cast<std::size_t>(a));
  return std::binary_search(list.begin(), list.end(), b);
}

namespace {

// BFS distances from src; -1 for unreachable.
std::vector<int> bfs_distances(const NominalGraph& g, int src) {
  std::vector<int> dist(static_cast<std::size_t>(g.node_count()), -1);
  std::deque<int> queue{src};
  dist[static_cast<std::size_t>(src)] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : g.neighbors(v)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace

bool NominalGraph::is_connected() const {
  const auto dist = bfs_distances(*this, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

int NominalGraph::diameter() const {
  int best = 0;
  for (int v = 0; v < node_count_; ++v) {
    const auto dist = bfs_distances(*this, v);
    for (int d : dist) {
      if (d < 0) {
        throw std::invalid_argument("diameter: graph is not connected");
      }
      best = std::max(best, d);
    }
  }
  return best;
}

NominalGraph union_graph(const std::vector<std::vector<Edge>>& edge_sets, int node_count) {
  std::vector<Edge> all;
  for (const auto& set : edge_sets) {
    all.insert(all.end(), set.begin(), set.end());
  }
  return NominalGraph(node_count, std::move(all));
}

std::vector<int> EdgeSchedule::neighbors_at(int node, long round) {
  std::vector<int> out;
  for (const auto& [a, b] : edges_at(round)) {
    if (a == node) out.push_back(b);
    if (b == node) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

WindowedSchedule::WindowedSchedule(NominalGraph nominal, int window,
                                   double extra_activation_prob, std::uint64_t seed)
    : nominal_(std::move(nominal)),
      window_(window),
      extra_activation_prob_(extra_activation_prob),
      seed_(seed) {
  if (window_ < 1) {
    throw std::invalid_argument("schedule: window must be >= 1");
  }
  if (extra_activation_prob_ < 0.0 || extra_activation_prob_ > 1.0) {
    throw std::invalid_argument("schedule: extra_activation_prob outside [0, 1]");
  }
  if (!nominal_.is_connected()) {
    throw std::invalid_argument("schedule: nominal graph is not connected");
  }
}

void WindowedSchedule::materialize_window(long window_index) {
  Rng rng = Rng::derive(seed_, static_cast<std::uint64_t>(window_index));
  const auto& edges = nominal_.edges();
  std::vector<std::set<Edge>> rounds(static_cast<std::size_t>(window_));
  // Guaranteed slot per edge, then independent extras (draw order is part of
  // the determinism contract: slots for all edges first, then extras round by round).
  for (const Edge& e : edges) {
    rounds[rng.below(static_cast<std::uint64_t>(window_))].insert(e);
  }
  if (extra_activation_prob_ > 0.0) {
    for (int r = 0; r < window_; ++r) {
      for (const Edge& e : edges) {
        if (rng.bernoulli(extra_activation_prob_)) {
          rounds[static_cast<std::size_t>(r)].insert(e);
        }
      }
    }
  }
  cache_.assign(static_cast<std::size_t>(window_), {});
  for (int r = 0; r < window_; ++r) {
    cache_[static_cast<std::size_t>(r)].assign(rounds[static_cast<std::size_t>(r)].begin(),
                                               rounds[static_cast<std::size_t>(r)].end());
  }
  cached_window_ = window_index;
}

const std::vector<Edge>& WindowedSchedule::edges_at(long round) {
  if (round < 0) {
    throw std::out_of_range("schedule: negative round");
  }
  const long w = round / window_;
  if (w != cached_window_) {
    materialize_window(w);
  }
  return cache_[static_cast<std::size_t>(round % window_)];
}

DynamicGraphSequence::DynamicGraphSequence(NominalGraph nominal, int window,
                                           std::vector<std::vector<Edge>> rounds)
    : nominal_(std::move(nominal)), window_(window), rounds_(std::move(rounds)) {
  if (window_ < 1) {
    throw std::invalid_argument("sequence: window must be >= 1");
  }
  for (auto& r : rounds_) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
}

const std::vector<Edge>& DynamicGraphSequence::edges_at(long k) const {
  if (k < 0 || k >= round_count()) {
    throw std::out_of_range("sequence: round index out of range");
  }
  return rounds_[static_cast<std::size_t>(k)];
}

std::vector<int> DynamicGraphSequence::neighbors(int node, long k) const {
  std::vector<int> out;
  for (const auto& [a, b] : edges_at(k)) {
    if (a == node) out.push_back(b);
    if (b == node) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<long> DynamicGraphSequence::boundary_instants() const {
  std::vector<long> out;
  for (long t = 0; t < round_count(); t += window_) out.push_back(t);
  return out;
}

JointConnectivityReport verify_jointly_connected(const DynamicGraphSequence& seq) {
  JointConnectivityReport report;
  if (!seq.nominal().is_connected()) {
    report.message = "nominal graph is not connected";
    return report;
  }
  const auto& nominal_edges = seq.nominal().edges();
  const std::set<Edge> nominal_set(nominal_edges.begin(), nominal_edges.end());
  const int l = seq.window();
  const long complete_windows = seq.round_count() / l;
  for (long m = 0; m < complete_windows; ++m) {
    std::set<Edge> window_union;
    for (long k = m * l; k < (m + 1) * l; ++k) {
      for (const Edge& e : seq.edges_at(k)) {
        if (!nominal_set.count(e)) {
          report.first_bad_window = m;
          report.message = "round " + std::to_string(k) + " contains edge (" +
                           std::to_string(e.first) + "," + std::to_string(e.second) +
                           ") outside the nominal graph";
          return report;
        }
        window_union.insert(e);
      }
    }
    if (window_union.size() != nominal_set.size()) {
      for (const Edge& e : nominal_edges) {
        if (!window_union.count(e)) {
          report.first_bad_window = m;
          report.message = "window " + std::to_string(m) + " (rounds " + std::to_string(m * l) +
                           ".." + std::to_string((m + 1) * l - 1) + ") is missing edge (" +
                           std::to_string(e.first) + "," + std::to_string(e.second) + ")";
          return report;
        }
      }
    }
  }
  report.ok = true;
  return report;
}

DynamicGraphSequence generate_sequence(const NominalGraph& nominal, int window, long rounds,
                                       double extra_activation_prob, std::uint64_t seed) {
  WindowedSchedule schedule(nominal, window, extra_activation_prob, seed);
  std::vector<std::vector<Edge>> per_round;
  per_round.reserve(static_cast<std::size_t>(rounds));
  for (long k = 0; k < rounds; ++k) {
    per_round.push_back(schedule.edges_at(k));
  }
  return DynamicGraphSequence(nominal, window, std::move(per_round));
}

NominalGraph random_connected_graph(int n, double edge_prob, int target_diameter,
                                    std::uint64_t seed, int max_attempts) {
  if (n < 1) {
    throw std::invalid_argument("random graph: n must be >= 1");
  }
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(attempt));
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.bernoulli(edge_prob)) edges.push_back({i, j});
      }
    }
    NominalGraph g(n, std::move(edges));
    if (!g.is_connected()) continue;
    if (target_diameter > 0 && g.diameter() != target_diameter) continue;
    return g;
  }
  throw std::runtime_error("random graph: no sample matched the constraints after " +
                           std::to_string(max_attempts) + " attempts");
}

}  // namespace gridalloc
