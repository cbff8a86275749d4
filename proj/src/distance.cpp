#include "lmdp/distance.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lmdp/linalg.hpp"
#include "lmdp/lp.hpp"
#include "lmdp/trace.hpp"

namespace lmdp {

PairGraph pair_graph(const Lmc& lmc) {
  const int n = lmc.n();
  PairGraph g;
  g.n = n;
  g.idx.assign(static_cast<std::size_t>(n) * n, -1);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (lmc.label(u) == lmc.label(v)) {
        g.idx[u * n + v] = static_cast<int>(g.vertices.size());
        g.vertices.emplace_back(u, v);
      }
    }
  }
  std::vector<std::vector<int>> preds(n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (lmc.row(p)[q].sgn() > 0) preds[q].push_back(p);
    }
  }
  g.adj.resize(g.vertices.size());
  for (int i = 0; i < static_cast<int>(g.vertices.size()); ++i) {
    const auto [u, v] = g.vertices[i];
    for (int sp : preds[u]) {
      for (int tp : preds[v]) {
        const int j = g.idx[sp * n + tp];  // predecessor pairs with mismatched labels are not vertices
        if (j >= 0) g.adj[i].push_back(j);
      }
    }
  }
  return g;
}

bool lmc_pb_eq1(const Lmc& lmc, int s, int t) {
  const PairGraph g = pair_graph(lmc);
  const Partition bis = lmc_bisim(lmc);
  std::vector<char> reached(g.vertices.size(), 0);
  std::deque<int> queue;
  for (int i = 0; i < static_cast<int>(g.vertices.size()); ++i) {
    const auto [u, v] = g.vertices[i];
    if (bis.same_block(u, v)) {
      reached[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    for (int j : g.adj[i]) {
      if (!reached[j]) {
        reached[j] = 1;
        queue.push_back(j);
      }
    }
  }
  if (lmc.label(s) != lmc.label(t)) return true;  // not even a vertex
  return !reached[g.vertex_index(s, t)];
}

ReachablePairs reachable_pairs(const Lmc& lmc, const Dist& mu, const Dist& nu) {
  const int n = lmc.n();
  ReachablePairs out;
  std::deque<std::pair<int, int>> work;
  auto add = [&](int a, int b) {
    if (out.pairs.insert({a, b}).second) work.emplace_back(a, b);
  };
  for (int a : mu.support()) {
    for (int b : nu.support()) add(a, b);
  }
  while (!work.empty()) {
    const auto [a, b] = work.front();
    work.pop_front();
    // Every word reaching this pair ends here unless both states emit the
    // same label next; only then do the successors stay synchronized.
    if (lmc.label(a) != lmc.label(b)) continue;
    for (int a2 = 0; a2 < n; ++a2) {
      if (lmc.row(a)[a2].sgn() <= 0) continue;
      for (int b2 = 0; b2 < n; ++b2) {
        if (lmc.row(b)[b2].sgn() > 0) add(a2, b2);
      }
    }
  }
  out.proj.assign(n, {});
  for (const auto& [a, b] : out.pairs) out.proj[a].push_back(b);  // set order keeps each list sorted
  return out;
}

namespace {

// Basis of the space spanned by M(w) 1 over all finite words w: start from the
// all-ones vector and close under multiplication by every label matrix.
std::vector<ColVec> chain_word_basis(const Lmc& lmc) {
  const int n = lmc.n();
  std::vector<Matrix> mats;
  for (const std::string& a : lmc.labels()) mats.push_back(label_matrix(lmc, a));
  Span span(n);
  std::vector<ColVec> basis;
  std::deque<ColVec> work;
  const ColVec one = ones(n);
  span.insert(one);
  basis.push_back(one);
  work.push_back(one);
  while (!work.empty()) {
    const ColVec v = work.front();
    work.pop_front();
    for (const Matrix& m : mats) {
      ColVec u = m.mul(v);
      if (span.insert(u)) {
        basis.push_back(u);
        work.push_back(u);
      }
    }
  }
  return basis;
}

}  // namespace

bool lmc_tv_lt1(const Lmc& lmc, const Dist& mu, const Dist& nu) {
  const int n = lmc.n();
  const ReachablePairs reach = reachable_pairs(lmc, mu, nu);
  // A pair (r, r) reachable by one word on both sides gives two equal point
  // masses, so the distance is below one outright.
  for (int r = 0; r < n; ++r) {
    if (reach.contains(r, r)) return true;
  }
  const std::vector<ColVec> basis = chain_word_basis(lmc);
  // The distance is below one iff, for some r1, the affine cone
  //   { c_{r1} + sum_t lam_t c_t - sum_{t in reach(r1)} lam'_t c_t : lam, lam' >= 0 }
  // meets the orthogonal complement of the word-probability space: such a
  // vector splits into two trace-equivalent subdistributions, one containing
  // r1, the other supported inside r1's co-reachable set.
  for (int r1 = 0; r1 < n; ++r1) {
    LinearProgram lp;
    std::vector<int> v_var(n), lam_var(n);
    std::vector<int> lamp_var(n, -1);
    for (int u = 0; u < n; ++u) v_var[u] = lp.add_var("v." + std::to_string(u));
    for (int u = 0; u < n; ++u) lam_var[u] = lp.add_var("lam." + std::to_string(u));
    for (int u : reach.proj[r1]) lamp_var[u] = lp.add_var("lamneg." + std::to_string(u));
    const int nv = lp.num_vars();
    for (const ColVec& b : basis) {
      std::vector<Rat> row(nv, Rat(0));
      for (int u = 0; u < n; ++u) row[v_var[u]] = b[u];
      lp.add_row(std::move(row), Rel::Eq, Rat(0));
    }
    for (int u = 0; u < n; ++u) {
      std::vector<Rat> row(nv, Rat(0));
      row[v_var[u]] = 1;
      row[lam_var[u]] = -1;
      if (lamp_var[u] >= 0) row[lamp_var[u]] = 1;
      lp.add_row(std::move(row), Rel::Eq, Rat(u == r1 ? 1 : 0));
    }
    for (int u = 0; u < n; ++u) {
      std::vector<Rat> row(nv, Rat(0));
      row[lam_var[u]] = 1;
      lp.add_row(std::move(row), Rel::Ge, Rat(0));
    }
    for (int u = 0; u < n; ++u) {
      if (lamp_var[u] < 0) continue;
      std::vector<Rat> row(nv, Rat(0));
      row[lamp_var[u]] = 1;
      lp.add_row(std::move(row), Rel::Ge, Rat(0));
    }
    if (lp_solve(lp).status == LpStatus::Feasible) return true;
  }
  return false;
}

namespace {

// Walks every partition of the states into label-pure blocks, in restricted
// growth order (each state joins an earlier block or opens the next one), so
// each partition shows up exactly once and in canonical form.  An optional
// forced pair pins the later state into the earlier state's block.  Every
// completed partition counts against the guard; visit returns true to stop.
class PartitionWalk {
 public:
  PartitionWalk(const Mdp& mdp, std::uint64_t guard) : mdp_(mdp), guard_(guard) {}

  void force_pair(int a, int b) {
    force_a_ = std::min(a, b);
    force_b_ = std::max(a, b);
  }

  std::uint64_t count() const { return count_; }

  void run(const std::function<bool(const std::vector<int>&, int)>& visit) {
    visit_ = &visit;
    assign_.assign(mdp_.n(), -1);
    block_label_.clear();
    stopped_ = false;
    step(0);
  }

 private:
  void step(int u) {
    if (stopped_) return;
    if (u == mdp_.n()) {
      if (count_ == guard_) throw GuardExceeded("partition enumeration", guard_);
      ++count_;
      if ((*visit_)(assign_, static_cast<int>(block_label_.size()))) stopped_ = true;
      return;
    }
    if (u == force_b_) {
      assign_[u] = assign_[force_a_];
      step(u + 1);
      assign_[u] = -1;
      return;
    }
    for (int b = 0; b < static_cast<int>(block_label_.size()) && !stopped_; ++b) {
      if (block_label_[b] != mdp_.label(u)) continue;
      assign_[u] = b;
      step(u + 1);
    }
    if (stopped_) {
      assign_[u] = -1;
      return;
    }
    assign_[u] = static_cast<int>(block_label_.size());
    block_label_.push_back(mdp_.label(u));
    step(u + 1);
    block_label_.pop_back();
    assign_[u] = -1;
  }

  const Mdp& mdp_;
  std::uint64_t guard_;
  std::uint64_t count_ = 0;
  int force_a_ = -1, force_b_ = -1;
  std::vector<int> assign_;
  std::vector<std::string> block_label_;
  bool stopped_ = false;
  const std::function<bool(const std::vector<int>&, int)>* visit_ = nullptr;
};

// Mass of one successor row into each block.
std::vector<Rat> row_block_mass(const std::vector<Rat>& row, const std::vector<int>& assign,
                                int nblocks) {
  std::vector<Rat> mass(nblocks, Rat(0));
  for (int t = 0; t < static_cast<int>(row.size()); ++t) {
    if (row[t].sgn() != 0) mass[assign[t]] += row[t];
  }
  return mass;
}

// Necessary condition checked before any solving: two states sharing a block
// whose rows are strategy-independent (single action) must already push equal
// mass into every block.
bool single_action_rows_agree(const Mdp& mdp, const std::vector<int>& assign, int nblocks) {
  const int n = mdp.n();
  std::vector<std::vector<int>> members(nblocks);
  for (int u = 0; u < n; ++u) members[assign[u]].push_back(u);
  for (const std::vector<int>& blk : members) {
    bool have_ref = false;
    std::vector<Rat> ref;
    for (int u : blk) {
      if (mdp.action_count(u) != 1) continue;
      std::vector<Rat> mass = row_block_mass(mdp.action_row(u, 0), assign, nblocks);
      if (!have_ref) {
        ref = std::move(mass);
        have_ref = true;
      } else if (mass != ref) {
        return false;
      }
    }
  }
  return true;
}

// Feasibility program for "this partition is closed under some strategy":
// one weight variable per available action, rows per state summing to one,
// all weights nonnegative, and equal block mass for block-mates.
struct StrategyLp {
  LinearProgram lp;
  std::vector<int> first_var;  // per state, index of its first action weight
};

StrategyLp partition_strategy_lp(const Mdp& mdp, const std::vector<int>& assign, int nblocks) {
  const int n = mdp.n();
  StrategyLp out;
  out.first_var.resize(n);
  for (int u = 0; u < n; ++u) {
    out.first_var[u] = out.lp.num_vars();
    for (int m = 0; m < mdp.action_count(u); ++m) {
      out.lp.add_var("x." + std::to_string(u) + "." + std::to_string(m));
    }
  }
  const int nv = out.lp.num_vars();
  for (int u = 0; u < n; ++u) {
    std::vector<Rat> row(nv, Rat(0));
    for (int m = 0; m < mdp.action_count(u); ++m) row[out.first_var[u] + m] = 1;
    out.lp.add_row(std::move(row), Rel::Eq, Rat(1));
  }
  for (int u = 0; u < n; ++u) {
    for (int m = 0; m < mdp.action_count(u); ++m) {
      std::vector<Rat> row(nv, Rat(0));
      row[out.first_var[u] + m] = 1;
      out.lp.add_row(std::move(row), Rel::Ge, Rat(0));
    }
  }
  std::vector<std::vector<int>> members(nblocks);
  for (int u = 0; u < n; ++u) members[assign[u]].push_back(u);
  // Equality between consecutive block-mates reaches every pair by
  // transitivity.
  for (const std::vector<int>& blk : members) {
    for (std::size_t i = 1; i < blk.size(); ++i) {
      const int a = blk[i - 1], b = blk[i];
      std::vector<std::vector<Rat>> mass_a, mass_b;
      for (int m = 0; m < mdp.action_count(a); ++m) {
        mass_a.push_back(row_block_mass(mdp.action_row(a, m), assign, nblocks));
      }
      for (int m = 0; m < mdp.action_count(b); ++m) {
        mass_b.push_back(row_block_mass(mdp.action_row(b, m), assign, nblocks));
      }
      for (int e = 0; e < nblocks; ++e) {
        std::vector<Rat> row(nv, Rat(0));
        for (int m = 0; m < mdp.action_count(a); ++m) row[out.first_var[a] + m] = mass_a[m][e];
        for (int m = 0; m < mdp.action_count(b); ++m) row[out.first_var[b] + m] -= mass_b[m][e];
        out.lp.add_row(std::move(row), Rel::Eq, Rat(0));
      }
    }
  }
  return out;
}

Strategy strategy_from_point(const Mdp& mdp, const StrategyLp& slp, const std::vector<Rat>& x) {
  Strategy alpha;
  alpha.w.resize(mdp.n());
  for (int u = 0; u < mdp.n(); ++u) {
    alpha.w[u].assign(mdp.action_count(u), Rat(0));
    for (int m = 0; m < mdp.action_count(u); ++m) alpha.w[u][m] = x[slp.first_var[u] + m];
  }
  return alpha;
}

// Feasible point whose support is maximal: averaging one maximizer per
// coordinate keeps feasibility (convexity) and keeps every coordinate
// positive that is positive anywhere in the feasible set.
std::optional<std::vector<Rat>> max_support_point(LinearProgram lp) {
  lp.objective.reset();
  const LpResult base = lp_solve(lp);
  if (base.status != LpStatus::Feasible) return std::nullopt;
  std::vector<Rat> sum(lp.num_vars(), Rat(0));
  long hits = 0;
  for (int i = 0; i < lp.num_vars(); ++i) {
    std::vector<Rat> obj(lp.num_vars(), Rat(0));
    obj[i] = 1;
    lp.objective = std::move(obj);
    const LpResult r = lp_solve(lp);
    if (r.status == LpStatus::Feasible && r.optimum && r.optimum->sgn() > 0) {
      for (int j = 0; j < lp.num_vars(); ++j) sum[j] += r.point[j];
      ++hits;
    }
  }
  if (hits == 0) return base.point;
  const Rat scale(1, hits);
  for (Rat& v : sum) v *= scale;
  lp.objective.reset();
  if (!lp_point_satisfies(lp, sum)) throw std::logic_error("averaged point left the feasible set");
  return sum;
}

}  // namespace

StrategySearchResult pb_eq0(const Mdp& mdp, int s, int t, std::uint64_t guard) {
  StrategySearchResult out;
  if (s == t) {
    out.answer = Answer::Yes;
    out.witness = uniform_strategy(mdp);
    return out;
  }
  if (mdp.label(s) != mdp.label(t)) {
    out.answer = Answer::No;
    return out;
  }
  PartitionWalk walk(mdp, guard);
  walk.force_pair(s, t);
  try {
    walk.run([&](const std::vector<int>& assign, int nblocks) {
      if (!single_action_rows_agree(mdp, assign, nblocks)) return false;
      StrategyLp slp = partition_strategy_lp(mdp, assign, nblocks);
      const LpResult r = lp_solve(slp.lp);
      if (r.status != LpStatus::Feasible) return false;
      Strategy alpha = strategy_from_point(mdp, slp, r.point);
      // A feasible partition is closed under alpha, so its blocks only join
      // bisimilar states; failure here would be an internal inconsistency.
      if (!lmc_bisim(induce(mdp, alpha)).same_block(s, t)) {
        throw std::logic_error("feasible block partition failed bisimilarity verification");
      }
      out.answer = Answer::Yes;
      out.witness = std::move(alpha);
      return true;
    });
  } catch (const GuardExceeded&) {
    out.candidates = walk.count();
    throw;
  }
  out.candidates = walk.count();
  return out;
}

namespace {

// One realizable successor set of a state, with every action whose support
// stays inside it.  A strategy's successor set at a state is the union of the
// supports of the actions it weights, so these sets are exactly the unions of
// nonempty action subsets, and the listed actions form the largest subset
// realizing the set.
struct SupportChoice {
  std::vector<int> succ;
  std::vector<int> actions;
};

std::vector<SupportChoice> support_choices(const Mdp& mdp, int u, std::uint64_t guard,
                                           std::uint64_t& work) {
  const int k = mdp.action_count(u);
  std::vector<std::vector<int>> supports(k);
  for (int m = 0; m < k; ++m) {
    const std::vector<Rat>& row = mdp.action_row(u, m);
    for (int t2 = 0; t2 < static_cast<int>(row.size()); ++t2) {
      if (row[t2].sgn() > 0) supports[m].push_back(t2);
    }
  }
  std::set<std::vector<int>> seen;
  std::vector<SupportChoice> out;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    if (work == guard) throw GuardExceeded("successor-set enumeration", guard);
    ++work;
    std::set<int> uni;
    for (int m = 0; m < k; ++m) {
      if (mask & (1u << m)) uni.insert(supports[m].begin(), supports[m].end());
    }
    std::vector<int> succ(uni.begin(), uni.end());
    if (!seen.insert(succ).second) continue;
    SupportChoice choice;
    choice.succ = std::move(succ);
    for (int m = 0; m < k; ++m) {
      if (std::includes(choice.succ.begin(), choice.succ.end(), supports[m].begin(),
                        supports[m].end())) {
        choice.actions.push_back(m);
      }
    }
    out.push_back(std::move(choice));
  }
  return out;
}

}  // namespace

StrategySearchResult pb_eq1(const Mdp& mdp, int s, int t, std::uint64_t guard) {
  const int n = mdp.n();
  StrategySearchResult out;
  if (mdp.label(s) != mdp.label(t)) {
    // The pair can never be joined, under any strategy.
    Strategy uni = uniform_strategy(mdp);
    if (!lmc_pb_eq1(induce(mdp, uni), s, t)) {
      throw std::logic_error("label-distinct pair verified as distance below one");
    }
    out.answer = Answer::Yes;
    out.witness = std::move(uni);
    return out;
  }
  if (s == t) {
    out.answer = Answer::No;
    return out;
  }

  // States never visited from s or t cannot influence the verdict; they keep
  // every action available.  The rest are searched in breadth-first order so
  // the pruning below starts cutting at shallow depth.
  std::vector<char> reachable(n, 0);
  std::vector<int> order;
  std::deque<int> bfs;
  reachable[s] = reachable[t] = 1;
  bfs.push_back(std::min(s, t));
  bfs.push_back(std::max(s, t));
  while (!bfs.empty()) {
    const int u = bfs.front();
    bfs.pop_front();
    order.push_back(u);
    for (int m = 0; m < mdp.action_count(u); ++m) {
      const std::vector<Rat>& row = mdp.action_row(u, m);
      for (int v = 0; v < n; ++v) {
        if (row[v].sgn() > 0 && !reachable[v]) {
          reachable[v] = 1;
          bfs.push_back(v);
        }
      }
    }
  }

  std::uint64_t work = 0;
  std::vector<std::vector<SupportChoice>> choices(n);
  for (int u : order) choices[u] = support_choices(mdp, u, guard, work);

  // chosen[u]: index into choices[u]; -1 while still open (only searched
  // states are ever open; unsearched states expose all successors).
  std::vector<int> chosen(n, -1);
  std::vector<std::vector<int>> full_succ(n);
  for (int u = 0; u < n; ++u) {
    if (!reachable[u]) {
      std::set<int> uni;
      for (int m = 0; m < mdp.action_count(u); ++m) {
        const std::vector<Rat>& row = mdp.action_row(u, m);
        for (int v = 0; v < n; ++v) {
          if (row[v].sgn() > 0) uni.insert(v);
        }
      }
      full_succ[u] = std::vector<int>(uni.begin(), uni.end());
    }
  }
  auto succ_of = [&](int u) -> const std::vector<int>* {
    if (!reachable[u]) return &full_succ[u];
    if (chosen[u] < 0) return nullptr;
    return &choices[u][chosen[u]].succ;
  };

  // If the pairs forced reachable from (s, t) by the supports fixed so far
  // already include a diagonal pair, every completion keeps the distance
  // below one, so the whole subtree can be skipped.
  auto forces_diagonal = [&]() {
    std::set<std::pair<int, int>> seen;
    std::deque<std::pair<int, int>> q;
    seen.insert({s, t});
    q.emplace_back(s, t);
    while (!q.empty()) {
      const auto [a, b] = q.front();
      q.pop_front();
      if (a == b) return true;
      if (mdp.label(a) != mdp.label(b)) continue;
      const std::vector<int>* sa = succ_of(a);
      const std::vector<int>* sb = succ_of(b);
      if (sa == nullptr || sb == nullptr) continue;
      for (int a2 : *sa) {
        for (int b2 : *sb) {
          if (seen.insert({a2, b2}).second) q.emplace_back(a2, b2);
        }
      }
    }
    return false;
  };

  const std::function<bool(std::size_t)> search = [&](std::size_t depth) -> bool {
    if (depth == order.size()) {
      // All supports fixed: restrict each state to the conforming actions,
      // build the strategy that separates as much as any strategy of the
      // restriction can, and test the pair on the chain it induces.
      MdpBuilder builder;
      for (int u = 0; u < n; ++u) {
        builder.state(mdp.state_name(u), mdp.label(u));
        const std::vector<int>* acts = nullptr;
        std::vector<int> all;
        if (reachable[u]) {
          acts = &choices[u][chosen[u]].actions;
        } else {
          all.resize(mdp.action_count(u));
          for (int m = 0; m < mdp.action_count(u); ++m) all[m] = m;
          acts = &all;
        }
        for (int m : *acts) {
          std::vector<std::pair<std::string, Rat>> succ;
          const std::vector<Rat>& row = mdp.action_row(u, m);
          for (int v = 0; v < n; ++v) {
            if (row[v].sgn() != 0) succ.emplace_back(mdp.state_name(v), row[v]);
          }
          builder.action(mdp.action_name(u, m), std::move(succ));
        }
      }
      for (const std::string& l : mdp.labels()) builder.declare_label(l);
      const Mdp restricted = builder.build();
      const Strategy beta = minimizing_strategy(restricted);
      Strategy full;
      full.w.resize(n);
      for (int u = 0; u < n; ++u) {
        full.w[u].assign(mdp.action_count(u), Rat(0));
        for (int m = 0; m < restricted.action_count(u); ++m) {
          full.w[u][mdp.find_action(u, restricted.action_name(u, m))] = beta.w[u][m];
        }
      }
      if (!lmc_pb_eq1(induce(mdp, full), s, t)) return false;
      out.answer = Answer::Yes;
      out.witness = std::move(full);
      return true;
    }
    const int u = order[depth];
    for (std::size_t c = 0; c < choices[u].size(); ++c) {
      if (work == guard) throw GuardExceeded("successor-set enumeration", guard);
      ++work;
      chosen[u] = static_cast<int>(c);
      if (!forces_diagonal() && search(depth + 1)) return true;
      chosen[u] = -1;
    }
    return false;
  };

  try {
    search(0);
  } catch (const GuardExceeded&) {
    out.candidates = work;
    throw;
  }
  out.candidates = work;
  return out;
}

StrategySearchResult pb_lt1(const Mdp& mdp, int s, int t, std::uint64_t guard) {
  const int n = mdp.n();
  StrategySearchResult out;
  if (mdp.label(s) != mdp.label(t)) {
    out.answer = Answer::No;  // the pair is beyond reach of every strategy
    return out;
  }
  // The uniform strategy has the largest supports, so it reaches a diagonal
  // (always bisimilar) pair from (s, t) whenever any strategy does.  This
  // settles s = t as well.
  Strategy uni = uniform_strategy(mdp);
  const Lmc uchain = induce(mdp, uni);
  if (!lmc_pb_eq1(uchain, s, t)) {
    out.answer = Answer::Yes;
    out.witness = std::move(uni);
    return out;
  }
  // Any remaining witness strategy must sync-reach, from (s, t), a distinct
  // same-label pair that its own chain makes bisimilar; candidate pairs are
  // confined to those sync-reachable under the uniform chain.
  const ReachablePairs reach = reachable_pairs(uchain, Dist::dirac(n, s), Dist::dirac(n, t));
  std::set<std::pair<int, int>> meet_set;
  for (const auto& [a, b] : reach.pairs) {
    if (a != b && mdp.label(a) == mdp.label(b)) meet_set.insert({std::min(a, b), std::max(a, b)});
  }
  if (meet_set.empty()) {
    out.answer = Answer::No;
    return out;
  }
  const std::vector<std::pair<int, int>> meet(meet_set.begin(), meet_set.end());
  PartitionWalk walk(mdp, guard);
  try {
    walk.run([&](const std::vector<int>& assign, int nblocks) {
      bool joins_candidate = false;
      for (const auto& [a, b] : meet) {
        if (assign[a] == assign[b]) {
          joins_candidate = true;
          break;
        }
      }
      if (!joins_candidate) return false;
      if (!single_action_rows_agree(mdp, assign, nblocks)) return false;
      StrategyLp slp = partition_strategy_lp(mdp, assign, nblocks);
      const std::optional<std::vector<Rat>> point = max_support_point(slp.lp);
      if (!point) return false;
      Strategy alpha = strategy_from_point(mdp, slp, *point);
      // This point joins the candidate pair and carries every edge any
      // strategy closing this partition can have; if even it keeps the
      // distance at one, no point of this partition helps.
      if (lmc_pb_eq1(induce(mdp, alpha), s, t)) return false;
      out.answer = Answer::Yes;
      out.witness = std::move(alpha);
      return true;
    });
  } catch (const GuardExceeded&) {
    out.candidates = walk.count();
    throw;
  }
  out.candidates = walk.count();
  return out;
}

MdScreenResult md_underapprox(const Mdp& mdp, TvProblem problem, const Dist& mu, const Dist& nu,
                              std::uint64_t guard) {
  const int n = mdp.n();
  MdScreenResult out;
  MdStrategy cur;
  cur.choice.assign(n, 0);
  while (true) {
    if (out.tried == guard) throw GuardExceeded("deterministic-strategy screen", guard);
    ++out.tried;
    const Lmc chain = induce(mdp, strategy_from_md(mdp, cur));
    bool hit = false;
    switch (problem) {
      case TvProblem::Eq0: hit = lmc_trace_equiv(chain, mu, nu); break;
      case TvProblem::Lt1: hit = lmc_tv_lt1(chain, mu, nu); break;
      case TvProblem::Eq1: hit = !lmc_tv_lt1(chain, mu, nu); break;
    }
    if (hit) {
      out.answer = Answer::Yes;
      out.witness = cur;
      return out;
    }
    int i = 0;
    while (i < n && ++cur.choice[i] == mdp.action_count(i)) {
      cur.choice[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
  out.answer = Answer::Unknown;
  return out;
}

}  // namespace lmdp
