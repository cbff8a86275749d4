#pragma once

#include <cstdint>
#include <optional>

#include "lmdp/common.hpp"
#include "lmdp/model.hpp"

namespace lmdp {

// The canonically first MD strategy together with all of its single-state
// deviations (deduplicated), plus the transition matrix each of them induces
// per label.  This family generates the whole MD-reachable vector space.
struct GeneratorSet {
  std::vector<MdStrategy> strategies;         // base first, then deviations in state/action order
  std::vector<std::vector<Matrix>> matrices;  // matrices[i][a]: strategy i, label index a
};
GeneratorSet generator_set(const Mdp& mdp);

// Linearly independent family of vectors M_alpha(w) 1 whose span contains
// M_alpha(w) 1 for every MD strategy alpha and every word w.  Pairs are kept
// in insertion order; vectors[i] belongs to (strategies[i], words[i]).
struct MdVectorBasis {
  std::vector<MdStrategy> strategies;
  std::vector<Word> words;
  std::vector<ColVec> vectors;
  Span span;

  MdVectorBasis() : span(0) {}
};
MdVectorBasis md_vector_basis(const Mdp& mdp);

struct TvGt0Result {
  Answer answer = Answer::No;
  std::optional<MdStrategy> strategy;  // separating witness, verified
  std::optional<Word> word;
  int basis_size = 0;
};
// Is there a strategy under which mu and nu give some word different
// probability?  Polynomial; the witness is re-verified on the induced chain.
TvGt0Result tv_gt0(const Mdp& mdp, const Dist& mu, const Dist& nu);

// Do mu and nu generate identical word probabilities on this chain?
bool lmc_trace_equiv(const Lmc& lmc, const Dist& mu, const Dist& nu);

struct BruteTvResult {
  bool separated = false;
  std::optional<MdStrategy> strategy;
  std::optional<Word> word;
};
// Independent exhaustive check: every MD strategy crossed with every word of
// length at most |S| - 1.  The guard bounds strategy count times word count.
BruteTvResult brute_oracle_tv_gt0(const Mdp& mdp, const Dist& mu, const Dist& nu,
                                  std::uint64_t guard = 1u << 20);

}  // namespace lmdp
