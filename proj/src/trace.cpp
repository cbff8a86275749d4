#include "lmdp/trace.hpp"

#include <stdexcept>

namespace lmdp {

namespace {

std::vector<Matrix> chain_label_matrices(const Lmc& lmc) {
  std::vector<Matrix> out;
  out.reserve(lmc.labels().size());
  for (const std::string& a : lmc.labels()) out.push_back(label_matrix(lmc, a));
  return out;
}

// M_alpha(w) 1, computed right to left on the chain induced by alpha.
ColVec md_word_vector(const Mdp& mdp, const MdStrategy& alpha, const Word& w) {
  Lmc chain = induce(mdp, strategy_from_md(mdp, alpha));
  ColVec v = ones(mdp.n());
  for (auto it = w.rbegin(); it != w.rend(); ++it) v = label_matrix(chain, *it).mul(v);
  return v;
}

}  // namespace

GeneratorSet generator_set(const Mdp& mdp) {
  const int n = mdp.n();
  GeneratorSet out;
  MdStrategy base;
  base.choice.assign(n, 0);
  out.strategies.push_back(base);
  for (int s = 0; s < n; ++s)
    for (int m = 1; m < mdp.action_count(s); ++m) {
      MdStrategy dev = base;  // deviation in a single state; m = 0 is the base itself
      dev.choice[s] = m;
      out.strategies.push_back(dev);
    }
  out.matrices.reserve(out.strategies.size());
  for (const MdStrategy& a : out.strategies)
    out.matrices.push_back(chain_label_matrices(induce(mdp, strategy_from_md(mdp, a))));
  return out;
}

MdVectorBasis md_vector_basis(const Mdp& mdp) {
  const int n = mdp.n();
  const GeneratorSet gen = generator_set(mdp);
  const auto& labels = mdp.labels();

  MdVectorBasis out;
  out.span = Span(n);
  out.strategies.push_back(gen.strategies[0]);
  out.words.push_back({});
  out.vectors.push_back(ones(n));
  out.span.insert(out.vectors[0]);

  // Round j extends the basis from words of length <= j to length <= j + 1.
  // Independent vectors in Q^n cap the basis size at n, so n - 1 rounds
  // suffice; a round that adds nothing would repeat verbatim, so stop early.
  for (int round = 0; round + 1 < n && out.span.rank() < n; ++round) {
    const Span prev_span = out.span;
    const std::size_t snapshot = out.vectors.size();
    std::vector<char> unit_in_prev(n);
    for (int i = 0; i < n; ++i) {
      ColVec ci(n, Rat(0));
      ci[i] = Rat(1);
      unit_in_prev[i] = prev_span.contains(ci) ? 1 : 0;
    }
    bool added = false;
    for (std::size_t gi = 0; gi < gen.strategies.size(); ++gi)
      for (std::size_t ai = 0; ai < labels.size(); ++ai)
        for (std::size_t pi = 0; pi < snapshot; ++pi) {
          ColVec u = gen.matrices[gi][ai].mul(out.vectors[pi]);
          if (out.span.contains(u)) continue;
          // Merge the deviation with the word's strategy: where the unit
          // vector already lies in the previous span the choice is free to
          // follow the word's strategy; elsewhere it must follow the
          // deviation so the product above is reproduced up to the span.
          MdStrategy merged;
          merged.choice.resize(n);
          for (int i = 0; i < n; ++i)
            merged.choice[i] = unit_in_prev[i] ? out.strategies[pi].choice[i]
                                               : gen.strategies[gi].choice[i];
          Word w2;
          w2.reserve(out.words[pi].size() + 1);
          w2.push_back(labels[ai]);
          w2.insert(w2.end(), out.words[pi].begin(), out.words[pi].end());
          ColVec vnew = md_word_vector(mdp, merged, w2);
          if (!out.span.insert(vnew))
            throw std::logic_error("merged-strategy vector unexpectedly dependent");
          out.strategies.push_back(merged);
          out.words.push_back(w2);
          out.vectors.push_back(vnew);
          added = true;
          if (out.span.rank() == n) return out;
        }
    if (!added) break;
  }
  return out;
}

TvGt0Result tv_gt0(const Mdp& mdp, const Dist& mu, const Dist& nu) {
  MdVectorBasis basis = md_vector_basis(mdp);
  TvGt0Result res;
  res.basis_size = static_cast<int>(basis.vectors.size());
  for (std::size_t i = 0; i < basis.vectors.size(); ++i) {
    if (dot(mu.weights(), basis.vectors[i]) == dot(nu.weights(), basis.vectors[i])) continue;
    const MdStrategy& alpha = basis.strategies[i];
    const Word& w = basis.words[i];
    Lmc chain = induce(mdp, strategy_from_md(mdp, alpha));
    if (word_prob(chain, mu, w) == word_prob(chain, nu, w))
      throw std::logic_error("separating basis vector failed verification");
    res.answer = Answer::Yes;
    res.strategy = alpha;
    res.word = w;
    return res;
  }
  res.answer = Answer::No;
  return res;
}

bool lmc_trace_equiv(const Lmc& lmc, const Dist& mu, const Dist& nu) {
  const int n = lmc.n();
  const std::vector<Matrix> mats = chain_label_matrices(lmc);
  Span span(n);
  std::vector<ColVec> worklist;
  ColVec one = ones(n);
  if (dot(mu.weights(), one) != dot(nu.weights(), one)) return false;
  span.insert(one);
  worklist.push_back(one);
  while (!worklist.empty()) {
    ColVec v = worklist.back();
    worklist.pop_back();
    for (const Matrix& m : mats) {
      ColVec u = m.mul(v);
      if (!span.insert(u)) continue;
      if (dot(mu.weights(), u) != dot(nu.weights(), u)) return false;
      worklist.push_back(u);
    }
  }
  return true;
}

BruteTvResult brute_oracle_tv_gt0(const Mdp& mdp, const Dist& mu, const Dist& nu,
                                  std::uint64_t guard) {
  const int n = mdp.n();
  std::uint64_t work = 0;
  MdStrategy alpha;
  alpha.choice.assign(n, 0);
  BruteTvResult res;

  // Depth-first over words; equal pushed rows make every extension agree.
  auto search = [&](auto&& self, const std::vector<Matrix>& mats, std::vector<Rat>& mrow,
                    std::vector<Rat>& nrow, Word& w) -> bool {
    if (++work > guard) throw GuardExceeded("exhaustive separation search", guard);
    Rat pm, pn;
    for (const Rat& x : mrow) pm += x;
    for (const Rat& x : nrow) pn += x;
    if (pm != pn) return true;
    if (mrow == nrow) return false;
    if (static_cast<int>(w.size()) >= n - 1) return false;
    for (std::size_t ai = 0; ai < mats.size(); ++ai) {
      std::vector<Rat> m2 = mats[ai].mul_row(mrow);
      std::vector<Rat> n2 = mats[ai].mul_row(nrow);
      w.push_back(mdp.labels()[ai]);
      if (self(self, mats, m2, n2, w)) return true;
      w.pop_back();
    }
    return false;
  };

  while (true) {
    Lmc chain = induce(mdp, strategy_from_md(mdp, alpha));
    std::vector<Matrix> mats = chain_label_matrices(chain);
    std::vector<Rat> mrow = mu.weights(), nrow = nu.weights();
    Word w;
    if (search(search, mats, mrow, nrow, w)) {
      res.separated = true;
      res.strategy = alpha;
      res.word = w;
      return res;
    }
    int s = n - 1;  // odometer over action choices
    while (s >= 0) {
      if (++alpha.choice[s] < mdp.action_count(s)) break;
      alpha.choice[s] = 0;
      --s;
    }
    if (s < 0) break;
  }
  return res;
}

}  // namespace lmdp
