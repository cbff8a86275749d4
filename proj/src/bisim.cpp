#include "lmdp/bisim.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lmdp {

namespace {

// Probability mass each action of s puts into every block of x, deduplicated.
std::vector<std::vector<Rat>> block_rows(const Mdp& mdp, const Partition& x, int s) {
  std::vector<std::vector<Rat>> rows;
  for (int m = 0; m < mdp.action_count(s); ++m) {
    const std::vector<Rat>& d = mdp.action_row(s, m);
    std::vector<Rat> r(x.size(), Rat(0));
    for (int t = 0; t < mdp.n(); ++t) r[x.block_of[t]] += d[t];
    if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<Rat> chain_block_row(const Lmc& lmc, const Partition& x, int s) {
  std::vector<Rat> r(x.size(), Rat(0));
  const std::vector<Rat>& row = lmc.row(s);
  for (int t = 0; t < lmc.n(); ++t) r[x.block_of[t]] += row[t];
  return r;
}

bool is_prime(const Int& p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

Partition Partition::from_blocks(int n, std::vector<std::vector<int>> blocks) {
  Partition p;
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
  p.blocks = std::move(blocks);
  p.block_of.assign(n, -1);
  for (int i = 0; i < p.size(); ++i)
    for (int s : p.blocks[i]) {
      if (s < 0 || s >= n || p.block_of[s] != -1)
        throw std::invalid_argument("blocks do not partition the state set");
      p.block_of[s] = i;
    }
  for (int s = 0; s < n; ++s)
    if (p.block_of[s] == -1) throw std::invalid_argument("blocks do not partition the state set");
  return p;
}

Partition Partition::trivial(int n) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return from_blocks(n, {all});
}

Partition lmc_bisim(const Lmc& lmc) {
  const int n = lmc.n();
  std::map<std::string, std::vector<int>> by_label;
  for (int s = 0; s < n; ++s) by_label[lmc.label(s)].push_back(s);
  std::vector<std::vector<int>> blocks;
  for (auto& [lab, members] : by_label) blocks.push_back(members);
  Partition x = Partition::from_blocks(n, std::move(blocks));
  while (true) {
    std::map<std::pair<int, std::vector<Rat>>, std::vector<int>> groups;
    for (int s = 0; s < n; ++s)
      groups[{x.block_of[s], chain_block_row(lmc, x, s)}].push_back(s);
    if (static_cast<int>(groups.size()) == x.size()) return x;
    std::vector<std::vector<int>> next;
    for (auto& [key, members] : groups) next.push_back(members);
    x = Partition::from_blocks(n, std::move(next));
  }
}

bool equiv_x(const Mdp& mdp, const Partition& x, int s, int t) {
  if (mdp.label(s) != mdp.label(t)) return false;
  if (s == t) return true;
  auto rs = block_rows(mdp, x, s);
  if (rs.size() != 1) return false;
  auto rt = block_rows(mdp, x, t);
  return rt == rs;
}

RefinementTrace optimistic_refine(const Mdp& mdp) {
  const int n = mdp.n();
  RefinementTrace trace;
  trace.partitions.push_back(Partition::trivial(n));
  while (true) {
    const Partition& x = trace.partitions.back();
    // Group by label plus — for states whose actions collapse to a single
    // block row — that row; states with several distinct rows stay alone.
    std::map<std::tuple<std::string, int, std::vector<Rat>>, std::vector<int>> groups;
    for (int s = 0; s < n; ++s) {
      auto rows = block_rows(mdp, x, s);
      if (rows.size() == 1)
        groups[{mdp.label(s), -1, rows[0]}].push_back(s);
      else
        groups[{mdp.label(s), s, {}}].push_back(s);
    }
    std::vector<std::vector<int>> next;
    for (auto& [key, members] : groups) next.push_back(members);
    Partition refined = Partition::from_blocks(n, std::move(next));
    if (refined == x) return trace;
    trace.partitions.push_back(std::move(refined));
  }
}

std::set<Int> collect_denominators(const Mdp& mdp, const RefinementTrace& trace) {
  std::set<Int> out;
  for (const Partition& x : trace.partitions)
    for (const auto& block : x.blocks)
      for (int u = 0; u < mdp.n(); ++u) {
        std::vector<Rat> mass(mdp.action_count(u), Rat(0));
        for (int m = 0; m < mdp.action_count(u); ++m) {
          const std::vector<Rat>& d = mdp.action_row(u, m);
          for (int v : block) mass[m] += d[v];
          out.insert(mass[m].den());
        }
        for (int m1 = 0; m1 < mdp.action_count(u); ++m1)
          for (int m2 = 0; m2 < mdp.action_count(u); ++m2) {
            Rat diff = mass[m1] - mass[m2];
            if (diff.sgn() > 0) out.insert(diff.num());
          }
      }
  return out;
}

PrimeAssignment prime_assignment(int num_states, const std::set<Int>& denominators) {
  PrimeAssignment out;
  Int p = 1;
  for (int s = 0; s < num_states; ++s) {
    for (++p;; ++p) {
      if (!is_prime(p)) continue;
      bool ok = true;
      for (const Int& b : denominators)
        if (b % p == 0) {
          ok = false;
          break;
        }
      if (ok) break;
    }
    out.prime_of.push_back(p);
  }
  return out;
}

PartialStrategy build_partial_strategy(const Mdp& mdp, const RefinementTrace& trace,
                                       const PrimeAssignment& primes) {
  const int n = mdp.n();
  if (static_cast<int>(primes.prime_of.size()) != n)
    throw std::invalid_argument("one prime per state required");
  PartialStrategy out;
  out.w.resize(n);
  for (std::size_t i = 0; i + 1 < trace.partitions.size(); ++i) {
    const Partition& xi = trace.partitions[i];
    const Partition& xi1 = trace.partitions[i + 1];
    for (int u = 0; u < n; ++u) {
      if (block_rows(mdp, xi, u).size() != 1) continue;
      if (block_rows(mdp, xi1, u).size() == 1) continue;
      if (out.w[u].has_value()) throw std::logic_error("state weighted twice along the refinement");
      // First action pair and block, in action/block order, whose masses
      // separate; it exists because the rows over x_{i+1} differ.
      bool placed = false;
      for (int m1 = 0; m1 < mdp.action_count(u) && !placed; ++m1)
        for (int m2 = 0; m2 < mdp.action_count(u) && !placed; ++m2)
          for (int e = 0; e < xi1.size() && !placed; ++e) {
            Rat p1, p2;
            for (int v : xi1.blocks[e]) {
              p1 += mdp.action_row(u, m1)[v];
              p2 += mdp.action_row(u, m2)[v];
            }
            if (p1 > p2) {
              Rat inv = Rat(1) / Rat(primes.prime_of[u]);
              std::vector<Rat> w(mdp.action_count(u), Rat(0));
              w[m1] = inv;
              w[m2] = Rat(1) - inv;
              out.w[u] = std::move(w);
              placed = true;
            }
          }
      if (!placed) throw std::logic_error("no separating action pair at a splitting state");
    }
  }
  return out;
}

Strategy minimizing_strategy(const Mdp& mdp) {
  RefinementTrace trace = optimistic_refine(mdp);
  PrimeAssignment primes = prime_assignment(mdp.n(), collect_denominators(mdp, trace));
  return complete_with_first_action(mdp, build_partial_strategy(mdp, trace, primes));
}

PbGt0Result pb_gt0(const Mdp& mdp, int s, int t) {
  PbGt0Result res;
  RefinementTrace trace = optimistic_refine(mdp);
  if (trace.fixpoint().same_block(s, t)) {
    res.answer = Answer::No;
    return res;
  }
  Strategy beta = minimizing_strategy(mdp);
  Partition bisim = lmc_bisim(induce(mdp, beta));
  if (bisim.same_block(s, t)) throw std::logic_error("splitting strategy failed verification");
  res.answer = Answer::Yes;
  res.witness = std::move(beta);
  return res;
}

}  // namespace lmdp
