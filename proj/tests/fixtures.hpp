#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lmdp/etr.hpp"
#include "lmdp/model.hpp"

namespace fixtures {

using namespace lmdp;

// 11-state MDP (states s,t,sa,sb,ta,tb,q1,q2,q3,u,v; only v labelled "b").
// Both MD strategies collapse s and t; the two-action state q2 must randomize
// to tell them apart.
Mdp mdp_randomized_separation();

// 9-state MDP (s,sp,sa,sb,t,t1,t2,ta,tb; sb and tb labelled "b").  Either MD
// choice at sp leaves a bisimilar pair on the path from (s,t); mixing at sp
// pushes the bisimilarity distance of (s,t) to 1.
Mdp mdp_distance_one_needs_mixing();

// 6-state MDP with absorbing tails; the unique strategy merging s and t puts
// weight 1/2 on each action of s.
Mdp mdp_unique_half_half_merge();

// Same shape but tails loop back; s and t stay at distance < 1 only under a
// randomizing strategy.
Mdp mdp_loopback_half_half();

// 9-state chain holding two start states x0 and y0 with identical trace
// distributions; x0 branches before emitting "b", y0 after, so the pair is
// not bisimilar.
Lmc lmc_branch_timing_pair();

// splitmix64: tiny deterministic generator for reproducible tests.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t n);  // next() % n, bias acceptable here
};

Mdp random_mdp(Rng& rng, int max_states, int max_actions, int max_labels);
Dist random_dist(Rng& rng, int n);
// Strictly positive weights on every action.
Strategy random_positive_strategy(Rng& rng, const Mdp& mdp);

// Independent combinatorial oracles (bitmask enumeration).
bool subsetsum_brute(const std::vector<long>& values, long target);
bool setsplit_brute(int n_elements, const std::vector<std::vector<int>>& sets);

// Coefficients expressing target as a linear combination of the given rows,
// or nullopt when target lies outside their span.
std::optional<std::vector<Rat>> combination_coefficients(
    const std::vector<std::vector<Rat>>& rows, const std::vector<Rat>& target);

// Exact satisfying assignment for a formula produced by encode_tv_eq0, built
// from a strategy that makes mu and nu trace equivalent on the induced chain:
// strategy weights fill the x variables, F's rows are the closure of mu - nu
// under the one-letter matrices, and each B(a) row is solved from the closure
// coefficients.  Returns nullopt when the strategy is not such a witness.
std::optional<std::vector<Rat>> tv_eq0_witness_assignment(const EtrFormula& formula,
                                                          const Mdp& mdp, const Strategy& alpha,
                                                          const Dist& mu, const Dist& nu);

}  // namespace fixtures
