#pragma once

#include <optional>
#include <set>
#include <vector>

#include "lmdp/common.hpp"
#include "lmdp/model.hpp"

namespace lmdp {

// Partition of the state set in canonical form: members sorted within each
// block, blocks ordered by least member.
struct Partition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of;  // state -> block index

  static Partition from_blocks(int n, std::vector<std::vector<int>> blocks);
  static Partition trivial(int n);  // single block
  bool same_block(int s, int t) const { return block_of[s] == block_of[t]; }
  int size() const { return static_cast<int>(blocks.size()); }

  friend bool operator==(const Partition& a, const Partition& b) { return a.blocks == b.blocks; }
  friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
};

// Probabilistic bisimilarity quotient of a chain (coarsest partition where
// blocks agree on label and on probability into every block).
Partition lmc_bisim(const Lmc& lmc);

// One-step optimistic equivalence against a partition X: s and t are related
// iff they share a label and, when distinct, each has exactly one per-action
// distribution over the blocks of X and the two coincide.
bool equiv_x(const Mdp& mdp, const Partition& x, int s, int t);

// Partitions X0 = {S}, X_{i+1} = quotient by the optimistic equivalence
// against X_i, up to and including the fixpoint (the repeated entry is not
// retained).
struct RefinementTrace {
  std::vector<Partition> partitions;

  const Partition& fixpoint() const { return partitions.back(); }
};
RefinementTrace optimistic_refine(const Mdp& mdp);

// Denominators of all action probabilities into traced blocks, plus the
// numerators of all positive differences between two actions of one state
// into one block; everything in lowest terms.
std::set<Int> collect_denominators(const Mdp& mdp, const RefinementTrace& trace);

struct PrimeAssignment {
  std::vector<Int> prime_of;  // per state, pairwise distinct
};
// Smallest unused prime coprime with every collected number, assigned in
// canonical state order.  Primality by trial division (denominators are
// small at the scales this tool is meant for).
PrimeAssignment prime_assignment(int num_states, const std::set<Int>& denominators);

// Two-action mix 1/p_u vs 1 - 1/p_u at every state whose actions first
// become distinguishable along the trace; undefined elsewhere.
PartialStrategy build_partial_strategy(const Mdp& mdp, const RefinementTrace& trace,
                                       const PrimeAssignment& primes);

// Completion of the partial strategy with Dirac on the first action: the
// induced chain identifies as few state pairs as any induced chain can.
Strategy minimizing_strategy(const Mdp& mdp);

struct PbGt0Result {
  Answer answer = Answer::No;
  std::optional<Strategy> witness;  // verified: s, t not bisimilar in induce(mdp, witness)
};
// Is there a strategy making s and t non-bisimilar?  Polynomial.
PbGt0Result pb_gt0(const Mdp& mdp, int s, int t);

}  // namespace lmdp
