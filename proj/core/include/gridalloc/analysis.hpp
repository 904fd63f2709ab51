#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <optional>
#include <vector>

#include "gridalloc/fraction.hpp"
#include "gridalloc/graph.hpp"

namespace gridalloc {

// High-precision float for the probability work; the hitting-probability
// lower bound itself stays exact-rational so large window*diameter exponents
// cannot underflow to a bogus zero.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

struct BoundInputs {
  int n = 2;               // node count
  int window = 1;          // l
  int union_diameter = 1;  // diameter of the nominal graph
  int max_degree = 1;      // maximum degree in the nominal graph
  double p0 = 0.9;         // target probability, in (0, 1)
};

// (1 + max_degree)^-(window * union_diameter), exact.
Fraction hitting_probability_lower_bound(const BoundInputs& inputs);

// Largest admissible per-merge failure probability for a single target
// probability p0: 1 - 2^(log2 p0). Algebraically 1 - p0; computed through
// the exponential form.
BigFloat epsilon_bound_single(double p0);

// Per-merge epsilon so that all n-1 merges jointly succeed with probability
// at least p0': 1 - 2^(log2(p0') / (n - 1)).
BigFloat epsilon_bound_network(double p0_prime, int n);

// Least integer tau with (1 - (1+max_degree)^-(window*diameter))^tau <= epsilon.
BigInt tau_bound(const BigFloat& epsilon, const BoundInputs& inputs);

// n*l*D + (n-1)*tau*l*D rounds.
BigInt convergence_step_bound(int n, int window, int union_diameter, const BigInt& tau);

// Single token walk over the sequence: each round the holder moves to itself
// or a current neighbor, each with probability 1/(degree+1) — the same law
// as NodeState::select_target. Returns the first round the token sits on
// `target`, or nullopt if it has not within `horizon` rounds.
std::optional<long> token_walk_trial(const DynamicGraphSequence& seq, int start, int target,
                                     long horizon, std::uint64_t seed);

struct PairMarginRow {
  int start = -1;
  int target = -1;
  long trials = 0;
  long hits = 0;       // walks that reached the target within the horizon
  double estimate = 0;
  double sigma = 0;    // binomial standard error of the estimate
  Fraction bound;      // analytic lower bound
  bool ok = false;     // estimate + 3*sigma >= bound
};

struct Lemma1Report {
  long horizon = 0;  // window * diameter
  Fraction bound;
  std::vector<PairMarginRow> rows;
  bool all_ok = false;
};

// Empirical one-sided check of the hitting-probability lower bound: for a
// sample of ordered (start, target) pairs, estimates the probability the
// token reaches the target within window * diameter rounds over `trials`
// independent walks, and flags any estimate more than 3 sigma below the bound.
Lemma1Report verify_lemma1(const DynamicGraphSequence& seq, long trials, int pair_sample,
                           std::uint64_t seed);

}  // namespace gridalloc
