#pragma once

#include <vector>

#include "lmdp/model.hpp"

namespace lmdp {

struct SubsetSumInstance {
  std::vector<long> values;  // positive
  long target = 0;           // positive, at most the sum of values
};

struct SetSplitInstance {
  int n_elements = 0;                  // ground set e1..en
  std::vector<std::vector<int>> sets;  // nonempty subsets, 0-based element ids
};

struct NmfInstance {
  int rank = 0;  // target inner dimension, >= 1
  Matrix j;      // row-stochastic rational matrix
};

struct MdpQuery {
  Mdp mdp;
  int s = -1, t = -1;
};

struct MdpDistQuery {
  Mdp mdp;
  Dist mu, nu;
};

// Gadget with one two-way choice per value: some strategy makes s and t
// bisimilar iff some subset of the values sums to the target.
MdpQuery subsetsum_to_mdp(const SubsetSumInstance& inst);

// Twin-chain gadget over the set collection: some strategy keeps s and t at
// bisimilarity distance 1 iff the ground set splits so that no given set is
// monochromatic.
MdpQuery setsplit_to_mdp(const SetSplitInstance& inst);

// Two-sided gadget around the matrix J: the fixed left chain is trace
// equivalent to some induced right chain iff J admits a stochastic
// factorization of inner dimension at most the instance rank.
MdpDistQuery nmf_to_mdp(const NmfInstance& inst);

// Strategy of the generated MDP realizing a given stochastic factorization
// J = A W (A: n x rank, W: rank x m, both row-stochastic).
Strategy strategy_from_factorization(const Mdp& mdp, const NmfInstance& inst, const Matrix& a,
                                     const Matrix& w);

}  // namespace lmdp
