#include "gridalloc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridalloc/rng.hpp"

namespace gridalloc {

namespace {

void check_inputs(const BoundInputs& in) {
  if (in.n < 1 || in.window < 1 || in.union_diameter < 1 || in.max_degree < 1) {
    throw std::invalid_argument("bounds: n, window, diameter and max degree must be >= 1");
  }
  if (!(in.p0 > 0.0 && in.p0 < 1.0)) {
    throw std::invalid_argument("bounds: p0 must lie in (0, 1)");
  }
}

BigFloat to_bigfloat(const Fraction& f) { return BigFloat(f.num()) / BigFloat(f.den()); }

}  // namespace

Fraction hitting_probability_lower_bound(const BoundInputs& inputs) {
  check_inputs(inputs);
  const long exponent = static_cast<long>(inputs.window) * inputs.union_diameter;
  const BigInt denominator =
      boost::multiprecision::pow(BigInt(inputs.max_degree + 1), static_cast<unsigned>(exponent));
  return Fraction(BigInt(1), denominator);
}

BigFloat epsilon_bound_single(double p0) {
  if (!(p0 > 0.0 && p0 < 1.0)) {
    throw std::invalid_argument("epsilon bound: p0 must lie in (0, 1)");
  }
  const BigFloat two = 2;
  const BigFloat log2_p0 = boost::multiprecision::log(BigFloat(p0)) / boost::multiprecision::log(two);
  return BigFloat(1) - boost::multiprecision::pow(two, log2_p0);
}

BigFloat epsilon_bound_network(double p0_prime, int n) {
  if (!(p0_prime > 0.0 && p0_prime < 1.0)) {
    throw std::invalid_argument("epsilon bound: p0' must lie in (0, 1)");
  }
  if (n < 2) {
    throw std::invalid_argument("epsilon bound: n must be >= 2");
  }
  const BigFloat two = 2;
  const BigFloat log2_p0 =
      boost::multiprecision::log(BigFloat(p0_prime)) / boost::multiprecision::log(two);
  return BigFloat(1) - boost::multiprecision::pow(two, log2_p0 / BigFloat(n - 1));
}

BigInt tau_bound(const BigFloat& epsilon, const BoundInputs& inputs) {
  check_inputs(inputs);
  if (!(epsilon > 0 && epsilon < 1)) {
    throw std::invalid_argument("tau bound: epsilon must lie in (0, 1)");
  }
  const BigFloat q = to_bigfloat(hitting_probability_lower_bound(inputs));
  const BigFloat log_eps = boost::multiprecision::log(epsilon);
  const BigFloat log_miss = boost::multiprecision::log(BigFloat(1) - q);
  const BigFloat ratio = log_eps / log_miss;  // > 0: both logs are negative
  BigInt tau = static_cast<BigInt>(boost::multiprecision::ceil(ratio));
  // Pin "least integer >= ratio" against rounding in the division.
  while (BigFloat(tau) < ratio) ++tau;
  while (tau > 1 && BigFloat(tau - 1) >= ratio) --tau;
  return tau;
}

BigInt convergence_step_bound(int n, int window, int union_diameter, const BigInt& tau) {
  if (n < 1 || window < 1 || union_diameter < 1 || tau < 1) {
    throw std::invalid_argument("step bound: all inputs must be >= 1");
  }
  const BigInt per_phase = BigInt(window) * union_diameter;
  return BigInt(n) * per_phase + BigInt(n - 1) * tau * per_phase;
}

namespace {

// One walk over precomputed per-round adjacency. Shared by the public trial
// entry point and the ensemble verifier.
std::optional<long> walk(const std::vector<std::vector<std::vector<int>>>& adj_by_round,
                         int start, int target, long horizon, Rng& rng) {
  if (start == target) return 0;
  int position = start;
  for (long r = 0; r < horizon; ++r) {
    const auto& neighbors = adj_by_round[static_cast<std::size_t>(r)]
                                        [static_cast<std::size_t>(position)];
    const auto pick = rng.below(neighbors.size() + 1);
    if (pick != 0) position = neighbors[static_cast<std::size_t>(pick - 1)];
    if (position == target) return r + 1;
  }
  return std::nullopt;
}

std::vector<std::vector<std::vector<int>>> adjacency_by_round(const DynamicGraphSequence& seq,
                                                              long horizon) {
  if (seq.round_count() < horizon) {
    throw std::invalid_argument("token walk: sequence shorter than the walk horizon");
  }
  const int n = seq.nominal().node_count();
  std::vector<std::vector<std::vector<int>>> adj(static_cast<std::size_t>(horizon));
  for (long r = 0; r < horizon; ++r) {
    auto& round = adj[static_cast<std::size_t>(r)];
    round.assign(static_cast<std::size_t>(n), {});
    for (const auto& [a, b] : seq.edges_at(r)) {
      round[static_cast<std::size_t>(a)].push_back(b);
      round[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& list : round) std::sort(list.begin(), list.end());
  }
  return adj;
}

}  // namespace

std::optional<long> token_walk_trial(const DynamicGraphSequence& seq, int start, int target,
                                     long horizon, std::uint64_t seed) {
  const int n = seq.nominal().node_count();
  if (start < 0 || start >= n || target < 0 || target >= n) {
    throw std::invalid_argument("token walk: node index out of range");
  }
  if (horizon < 1) {
    throw std::invalid_argument("token walk: horizon must be >= 1");
  }
  const auto adj = adjacency_by_round(seq, horizon);
  Rng rng(seed);
  return walk(adj, start, target, horizon, rng);
}

Lemma1Report verify_lemma1(const DynamicGraphSequence& seq, long trials, int pair_sample,
                           std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("lemma check: trials must be >= 1");
  }
  const NominalGraph& nominal = seq.nominal();
  const int n = nominal.node_count();
  if (n < 2) {
    throw std::invalid_argument("lemma check: needs at least 2 nodes");
  }
  BoundInputs inputs;
  inputs.n = n;
  inputs.window = seq.window();
  inputs.union_diameter = nominal.diameter();
  inputs.max_degree = nominal.max_degree();

  Lemma1Report report;
  report.horizon = static_cast<long>(inputs.window) * inputs.union_diameter;
  report.bound = hitting_probability_lower_bound(inputs);
  const double bound_value = report.bound.to_double();

  const auto adj = adjacency_by_round(seq, report.horizon);

  // Sample ordered pairs without replacement.
  std::vector<std::pair<int, int>> pairs;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s != t) pairs.emplace_back(s, t);
    }
  }
  Rng pair_rng = Rng::derive(seed, 0);
  const std::size_t take = std::min<std::size_t>(pairs.size(),
                                                 static_cast<std::size_t>(std::max(1, pair_sample)));
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(pair_rng.below(pairs.size() - i));
    std::swap(pairs[i], pairs[j]);
  }
  pairs.resize(take);

  report.all_ok = true;
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    PairMarginRow row;
    row.start = pairs[idx].first;
    row.target = pairs[idx].second;
    row.trials = trials;
    row.bound = report.bound;
    for (long t = 0; t < trials; ++t) {
      Rng walk_rng = Rng::derive(Rng::derive(seed, idx + 1).next(), static_cast<std::uint64_t>(t));
      if (walk(adj, row.start, row.target, report.horizon, walk_rng)) {
        ++row.hits;
      }
    }
    row.estimate = static_cast<double>(row.hits) / static_cast<double>(trials);
    row.sigma = std::sqrt(row.estimate * (1.0 - row.estimate) / static_cast<double>(trials));
    row.ok = row.estimate + 3.0 * row.sigma >= bound_value;
    report.all_ok = report.all_ok && row.ok;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace gridalloc
