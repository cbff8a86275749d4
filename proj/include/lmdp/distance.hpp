#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "lmdp/bisim.hpp"
#include "lmdp/common.hpp"
#include "lmdp/model.hpp"

namespace lmdp {

// Graph on same-label state pairs with an edge from (u, v) to every pair of
// predecessors (s', t') with tau(s')(u) > 0 and tau(t')(v) > 0.  A pair (s, t)
// has bisimilarity distance < 1 iff it is reachable, along these edges, from
// a vertex whose components are bisimilar.
struct PairGraph {
  int n = 0;
  std::vector<std::pair<int, int>> vertices;  // lexicographic order
  std::vector<std::vector<int>> adj;          // by vertex index
  std::vector<int> idx;                       // n*n lookup, -1 for non-vertices

  int vertex_index(int u, int v) const { return idx[u * n + v]; }
};
PairGraph pair_graph(const Lmc& lmc);

// Bisimilarity distance of (s, t) equals 1?
bool lmc_pb_eq1(const Lmc& lmc, int s, int t);

// Pairs (r1, r2) such that some word w reaches r1 from mu and r2 from nu
// simultaneously: closure of support(mu) x support(nu) under synchronized
// successors of same-label pairs.
struct ReachablePairs {
  std::set<std::pair<int, int>> pairs;
  std::vector<std::vector<int>> proj;  // r1 -> sorted list of partners r2

  bool contains(int r1, int r2) const { return pairs.count({r1, r2}) != 0; }
};
ReachablePairs reachable_pairs(const Lmc& lmc, const Dist& mu, const Dist& nu);

// Total-variation distance of (mu, nu) on this chain strictly below 1?
// Exact linear programming over the trace vector space.
bool lmc_tv_lt1(const Lmc& lmc, const Dist& mu, const Dist& nu);

struct StrategySearchResult {
  Answer answer = Answer::No;
  std::optional<Strategy> witness;    // present on yes, verified
  std::uint64_t candidates = 0;       // enumeration work actually performed
};

// Is there a strategy making the bisimilarity distance of (s, t) zero / below
// one / equal to one?  Desk-scale complete searches; guards bound the number
// of enumerated candidates and overruns throw GuardExceeded.
StrategySearchResult pb_eq0(const Mdp& mdp, int s, int t, std::uint64_t guard = 4096);
StrategySearchResult pb_eq1(const Mdp& mdp, int s, int t, std::uint64_t guard = 4096);
StrategySearchResult pb_lt1(const Mdp& mdp, int s, int t, std::uint64_t guard = 4096);

enum class TvProblem { Eq0, Lt1, Eq1 };

struct MdScreenResult {
  Answer answer = Answer::Unknown;  // Yes or Unknown, never No
  std::optional<MdStrategy> witness;
  std::uint64_t tried = 0;
};
// Sound one-sided screen for the total-variation questions: tries every MD
// strategy and verifies any hit on the induced chain.
MdScreenResult md_underapprox(const Mdp& mdp, TvProblem problem, const Dist& mu, const Dist& nu,
                              std::uint64_t guard = 4096);

}  // namespace lmdp
