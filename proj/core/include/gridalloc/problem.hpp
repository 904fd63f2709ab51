#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridalloc/fraction.hpp"

namespace gridalloc {

// Per-node resources: `load` data units arriving during the horizon,
// `stored` data units already occupying memory, `capacity` memory units.
struct NodeResources {
  std::int64_t load = 0;
  std::int64_t stored = 0;
  std::int64_t capacity = 1;
};

class ProblemInstance {
 public:
  explicit ProblemInstance(std::vector<NodeResources> nodes);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const NodeResources& node(int j) const { return nodes_.at(static_cast<std::size_t>(j)); }
  const std::vector<NodeResources>& nodes() const { return nodes_; }

  // Data units a node has to place: load + stored.
  std::int64_t demand(int j) const;

  std::int64_t total_load() const { return total_load_; }          // mu
  std::int64_t total_stored() const { return total_stored_; }      // delta_tot
  std::int64_t total_capacity() const { return total_capacity_; }  // nu_max
  std::int64_t available_memory() const {                          // nu_avail
    return total_capacity_ - total_stored_;
  }

 private:
  std::vector<NodeResources> nodes_;
  std::int64_t total_load_ = 0;
  std::int64_t total_stored_ = 0;
  std::int64_t total_capacity_ = 0;
};

struct ValidationReport {
  bool ok = false;
  std::string message;  // first violation when !ok
  std::int64_t total_load = 0;
  std::int64_t total_stored = 0;
  std::int64_t total_capacity = 0;
  std::int64_t available_memory = 0;
  bool feasible = false;  // total_load <= available_memory
};

// Checks every instance invariant: capacity >= 1, load/stored >= 0,
// load + stored >= 1 per node, and total load within available memory.
ValidationReport validate(const ProblemInstance& instance);

// Quadratic storage-balance cost of node j at allocation parameter z:
// capacity_j / 2 * (z - demand_j / capacity_j)^2, exact.
Fraction local_cost(const ProblemInstance& instance, int j, const Fraction& z);

Fraction global_cost(const ProblemInstance& instance, const Fraction& z);

// Exact minimizer of the global cost: (mu + delta_tot) / nu_max.
Fraction optimal_z(const ProblemInstance& instance);

// Reciprocal of optimal_z: nu_max / (mu + delta_tot). This is the value every
// node's state ratio settles on.
Fraction optimal_ratio(const ProblemInstance& instance);

// Data node j should receive: optimal_z * capacity_j - stored_j, exact.
Fraction optimal_workload(const ProblemInstance& instance, int j);

}  // namespace gridalloc
