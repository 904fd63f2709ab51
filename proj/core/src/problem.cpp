#include "gridalloc/problem.hpp"

#include <limits>
#include <stdexcept>

namespace gridalloc {

namespace {

// Totals must stay well inside int64 so the engine can track conservation
// sums and cross products without widening beyond __int128.
constexpr std::int64_t kTotalLimit = std::int64_t{1} << 62;

}  // namespace

ProblemInstance::ProblemInstance(std::vector<NodeResources> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) {
    throw std::invalid_argument("instance: needs at least one node");
  }
  __int128 load = 0, stored = 0, capacity = 0;
  for (const auto& n : nodes_) {
    load += n.load;
    stored += n.stored;
    capacity += n.capacity;
  }
  if (load > kTotalLimit || stored > kTotalLimit || capacity > kTotalLimit ||
      load < -kTotalLimit || stored < -kTotalLimit || capacity < -kTotalLimit) {
    throw std::invalid_argument("instance: totals exceed the supported range");
  }
  total_load_ = static_cast<std::int64_t>(load);
  total_stored_ = static_cast<std::int64_t>(stored);
  total_capacity_ = static_cast<std::int64_t>(capacity);
}

std::int64_t ProblemInstance::demand(int j) const {
  const auto& n = node(j);
  return n.load + n.stored;
}

ValidationReport validate(const ProblemInstance& instance) {
  ValidationReport report;
  report.total_load = instance.total_load();
  report.total_stored = instance.total_stored();
  report.total_capacity = instance.total_capacity();
  report.available_memory = instance.available_memory();
  for (int j = 0; j < instance.node_count(); ++j) {
    const auto& n = instance.node(j);
    if (n.capacity < 1) {
      report.message = "node " + std::to_string(j) + ": capacity must be >= 1";
      return report;
    }
    if (n.load < 0 || n.stored < 0) {
      report.message = "node " + std::to_string(j) + ": load and stored must be >= 0";
      return report;
    }
    if (n.load + n.stored < 1) {
      // A node with nothing to place never transmits its memory mass, which
      // strands its capacity in the final ratio.
      report.message = "node " + std::to_string(j) + ": load + stored must be >= 1";
      return report;
    }
  }
  report.feasible = instance.total_load() <= instance.available_memory();
  if (!report.feasible) {
    report.message = "total load " + std::to_string(instance.total_load()) +
                     " exceeds available memory " + std::to_string(instance.available_memory());
    return report;
  }
  report.ok = true;
  return report;
}

Fraction local_cost(const ProblemInstance& instance, int j, const Fraction& z) {
  const auto& n = instance.node(j);
  const Fraction target(n.load + n.stored, n.capacity);
  const Fraction diff = z - target;
  return Fraction(n.capacity, 2) * diff * diff;
}

Fraction global_cost(const ProblemInstance& instance, const Fraction& z) {
  Fraction total;
  for (int j = 0; j < instance.node_count(); ++j) {
    total = total + local_cost(instance, j, z);
  }
  return total;
}

Fraction optimal_z(const ProblemInstance& instance) {
  return Fraction(instance.total_load() + instance.total_stored(), instance.total_capacity());
}

Fraction optimal_ratio(const ProblemInstance& instance) {
  return Fraction(instance.total_capacity(), instance.total_load() + instance.total_stored());
}

Fraction optimal_workload(const ProblemInstance& instance, int j) {
  const auto& n = instance.node(j);
  return optimal_z(instance) * Fraction::from_int(n.capacity) - Fraction::from_int(n.stored);
}

}  // namespace gridalloc
