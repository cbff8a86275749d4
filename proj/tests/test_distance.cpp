#include "lmdp/distance.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "lmdp/bisim.hpp"
#include "lmdp/trace.hpp"

using namespace lmdp;

namespace {

Lmc md_chain(const Mdp& mdp, std::vector<int> choice) {
  MdStrategy a;
  a.choice = std::move(choice);
  return induce(mdp, strategy_from_md(mdp, a));
}

// All memoryless-deterministic strategies, odometer order.
std::vector<MdStrategy> all_md(const Mdp& mdp) {
  std::vector<MdStrategy> out;
  MdStrategy cur;
  cur.choice.assign(mdp.n(), 0);
  while (true) {
    out.push_back(cur);
    int i = 0;
    while (i < mdp.n() && ++cur.choice[i] == mdp.action_count(i)) {
      cur.choice[i] = 0;
      ++i;
    }
    if (i == mdp.n()) break;
  }
  return out;
}

}  // namespace

TEST_CASE("pair graph vertices carry equal labels and edges point to predecessor pairs") {
  const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
  const Lmc chain = induce(mdp, uniform_strategy(mdp));
  const PairGraph g = pair_graph(chain);
  const int n = chain.n();

  for (const auto& [u, v] : g.vertices) CHECK(chain.label(u) == chain.label(v));
  for (int u = 0; u < n; ++u) CHECK(g.vertex_index(u, u) >= 0);  // diagonals always vertices
  int listed = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      const int i = g.vertex_index(u, v);
      if (chain.label(u) == chain.label(v)) {
        REQUIRE(i >= 0);
        CHECK(g.vertices[i] == std::pair<int, int>(u, v));
        ++listed;
      } else {
        CHECK(i == -1);
      }
    }
  }
  CHECK(listed == static_cast<int>(g.vertices.size()));

  // Every edge matches the definition: (u,v) -> (s',t') iff tau(s')(u) > 0
  // and tau(t')(v) > 0, and only such edges exist.
  for (int i = 0; i < static_cast<int>(g.vertices.size()); ++i) {
    const auto [u, v] = g.vertices[i];
    std::set<int> listed_adj(g.adj[i].begin(), g.adj[i].end());
    for (int sp = 0; sp < n; ++sp) {
      for (int tp = 0; tp < n; ++tp) {
        const int j = g.vertex_index(sp, tp);
        const bool should = j >= 0 && chain.row(sp)[u].sgn() > 0 && chain.row(tp)[v].sgn() > 0;
        CHECK(should == (j >= 0 && listed_adj.count(j) > 0));
      }
    }
  }
}

TEST_CASE("pair graph of the mixing fixture holds the (ta,sa) -> (t1,sp) edge") {
  const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
  const Lmc chain = induce(mdp, uniform_strategy(mdp));
  const PairGraph g = pair_graph(chain);
  const int i = g.vertex_index(chain.state_index("ta"), chain.state_index("sa"));
  const int j = g.vertex_index(chain.state_index("t1"), chain.state_index("sp"));
  REQUIRE(i >= 0);
  REQUIRE(j >= 0);
  CHECK(std::find(g.adj[i].begin(), g.adj[i].end(), j) != g.adj[i].end());
}

TEST_CASE("chain-level distance-one test on the mixing fixture") {
  const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
  const int s = mdp.state_index("s"), t = mdp.state_index("t");

  const Lmc uni = induce(mdp, uniform_strategy(mdp));
  CHECK(lmc_pb_eq1(uni, s, t));

  // Either deterministic choice at sp leaves a bisimilar pair on the way.
  const int sp = mdp.state_index("sp");
  for (int m = 0; m < 2; ++m) {
    std::vector<int> choice(mdp.n(), 0);
    choice[sp] = m;
    CHECK(!lmc_pb_eq1(md_chain(mdp, choice), s, t));
  }

  CHECK(!lmc_pb_eq1(uni, s, s));                                   // distance zero
  CHECK(lmc_pb_eq1(uni, s, mdp.state_index("sb")));                // label mismatch
}

TEST_CASE("reachable pairs: base product, frozen closure, closedness") {
  const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
  const Lmc chain = induce(mdp, uniform_strategy(mdp));
  const int n = chain.n();
  auto ix = [&](const char* name) { return chain.state_index(name); };
  const ReachablePairs r =
      reachable_pairs(chain, Dist::dirac(n, ix("s")), Dist::dirac(n, ix("t")));

  const std::set<std::pair<int, int>> expect = {
      {ix("s"), ix("t")},   {ix("sp"), ix("t1")}, {ix("sp"), ix("t2")}, {ix("sa"), ix("ta")},
      {ix("sa"), ix("tb")}, {ix("sb"), ix("ta")}, {ix("sb"), ix("tb")},
  };
  CHECK(r.pairs == expect);
  CHECK(r.contains(ix("sp"), ix("t1")));
  CHECK(!r.contains(ix("t1"), ix("sp")));  // ordered pairs
  CHECK(r.proj[ix("sp")] == std::vector<int>{ix("t1"), ix("t2")});

  // Synchronized successors of every same-label member stay inside.
  for (const auto& [a, b] : r.pairs) {
    if (chain.label(a) != chain.label(b)) continue;
    for (int a2 = 0; a2 < n; ++a2) {
      if (chain.row(a)[a2].sgn() <= 0) continue;
      for (int b2 = 0; b2 < n; ++b2) {
        if (chain.row(b)[b2].sgn() > 0) CHECK(r.contains(a2, b2));
      }
    }
  }
}

TEST_CASE("reachable pairs stop at the initial product when labels split immediately") {
  LmcBuilder b;
  b.state("p", "a").trans({{"p2", 1}});
  b.state("p2", "c").trans({{"p2", 1}});
  b.state("q", "b").trans({{"q2", 1}});
  b.state("q2", "d").trans({{"q2", 1}});
  const Lmc chain = b.build();
  const ReachablePairs r = reachable_pairs(chain, Dist::dirac(4, chain.state_index("p")),
                                           Dist::dirac(4, chain.state_index("q")));
  const std::set<std::pair<int, int>> expect = {{chain.state_index("p"), chain.state_index("q")}};
  CHECK(r.pairs == expect);
}

TEST_CASE("total-variation-below-one on fixed chains") {
  const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
  const int s = mdp.state_index("s"), t = mdp.state_index("t");
  const int sp = mdp.state_index("sp");
  const Dist ds = Dist::dirac(mdp.n(), s), dt = Dist::dirac(mdp.n(), t);

  // Either deterministic choice at sp keeps the distance at 1/2 < 1, while
  // mixing uniformly pushes it all the way to one.
  for (int m = 0; m < 2; ++m) {
    std::vector<int> choice(mdp.n(), 0);
    choice[sp] = m;
    CHECK(lmc_tv_lt1(md_chain(mdp, choice), ds, dt));
  }
  CHECK(!lmc_tv_lt1(induce(mdp, uniform_strategy(mdp)), ds, dt));

  // Equal initial distributions: distance zero.
  CHECK(lmc_tv_lt1(induce(mdp, uniform_strategy(mdp)), ds, ds));

  // Trace-equivalent but not bisimilar start states, disjoint components: the
  // diagonal shortcut cannot fire and the feasibility program must decide.
  const Lmc pairchain = fixtures::lmc_branch_timing_pair();
  const Dist dx = Dist::dirac(pairchain.n(), pairchain.state_index("x0"));
  const Dist dy = Dist::dirac(pairchain.n(), pairchain.state_index("y0"));
  CHECK(lmc_trace_equiv(pairchain, dx, dy));
  CHECK(lmc_tv_lt1(pairchain, dx, dy));

  // One side emits a-forever, the other b-forever: gap one.
  LmcBuilder b;
  b.state("p", "a").trans({{"p", 1}});
  b.state("q", "b").trans({{"q", 1}});
  const Lmc split = b.build();
  CHECK(!lmc_tv_lt1(split, Dist::dirac(2, 0), Dist::dirac(2, 1)));
}

TEST_CASE("strategy search: can the pair be made bisimilar") {
  SUBCASE("two deterministic collapse routes") {
    const Mdp mdp = fixtures::mdp_randomized_separation();
    const int s = mdp.state_index("s"), t = mdp.state_index("t");
    const StrategySearchResult r = pb_eq0(mdp, s, t);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(lmc_bisim(induce(mdp, *r.witness)).same_block(s, t));
  }

  SUBCASE("unique half-half witness, absorbing tails") {
    const Mdp mdp = fixtures::mdp_unique_half_half_merge();
    const int s = mdp.state_index("s"), t = mdp.state_index("t");
    const StrategySearchResult r = pb_eq0(mdp, s, t);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->w[s] == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
    CHECK(lmc_bisim(induce(mdp, *r.witness)).same_block(s, t));
    CHECK(r.candidates == 7);  // leaves visited up to the accepting partition
  }

  SUBCASE("unique half-half witness, looping tails") {
    const Mdp mdp = fixtures::mdp_loopback_half_half();
    const int s = mdp.state_index("s"), t = mdp.state_index("t");
    const StrategySearchResult r = pb_eq0(mdp, s, t);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->w[s] == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
  }

  SUBCASE("no strategy can merge the branch-timing pair") {
    const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
    const int s = mdp.state_index("s"), t = mdp.state_index("t");
    const StrategySearchResult r = pb_eq0(mdp, s, t);
    CHECK(r.answer == Answer::No);
    CHECK(!r.witness.has_value());

    // One-sided completeness of the no answer: strictly positive sampled
    // strategies all keep the pair apart.
    fixtures::Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
      const Strategy a = fixtures::random_positive_strategy(rng, mdp);
      CHECK(!lmc_bisim(induce(mdp, a)).same_block(s, t));
    }
  }

  SUBCASE("same state trivially yes, distinct labels trivially no") {
    const Mdp mdp = fixtures::mdp_unique_half_half_merge();
    CHECK(pb_eq0(mdp, 0, 0).answer == Answer::Yes);
    CHECK(pb_eq0(mdp, mdp.state_index("s"), mdp.state_index("sb")).answer == Answer::No);
  }

  SUBCASE("partition guard throws") {
    const Mdp mdp = fixtures::mdp_unique_half_half_merge();
    CHECK_THROWS_AS(pb_eq0(mdp, mdp.state_index("s"), mdp.state_index("t"), 3), GuardExceeded);
  }
}

TEST_CASE("strategy search: can the pair be pushed to distance one") {
  SUBCASE("mixing required") {
    const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
    const int s = mdp.state_index("s"), t = mdp.state_index("t");
    const StrategySearchResult r = pb_eq1(mdp, s, t);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(lmc_pb_eq1(induce(mdp, *r.witness), s, t));
    CHECK(strategy_randomizes(mdp, *r.witness));  // no deterministic witness exists
    for (const MdStrategy& md : all_md(mdp)) {
      CHECK(!lmc_pb_eq1(induce(mdp, strategy_from_md(mdp, md)), s, t));
    }
  }

  SUBCASE("deterministic witness suffices when tails loop back") {
    const Mdp mdp = fixtures::mdp_loopback_half_half();
    const int s = mdp.state_index("s"), t = mdp.state_index("t");
    const StrategySearchResult r = pb_eq1(mdp, s, t);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(lmc_pb_eq1(induce(mdp, *r.witness), s, t));
    CHECK(r.witness->w[s] == std::vector<Rat>{Rat(1), Rat(0)});  // first restriction wins
  }

  SUBCASE("forced diagonal meeting point: never distance one") {
    const Mdp mdp = fixtures::mdp_randomized_separation();
    const StrategySearchResult r = pb_eq1(mdp, mdp.state_index("s"), mdp.state_index("t"));
    CHECK(r.answer == Answer::No);
    CHECK(!r.witness.has_value());
  }

  SUBCASE("absorbing same-label tails: never distance one") {
    const Mdp mdp = fixtures::mdp_unique_half_half_merge();
    const StrategySearchResult r = pb_eq1(mdp, mdp.state_index("s"), mdp.state_index("t"));
    CHECK(r.answer == Answer::No);
  }

  SUBCASE("distinct labels trivially yes, same state trivially no") {
    const Mdp mdp = fixtures::mdp_unique_half_half_merge();
    const int s = mdp.state_index("s"), sb = mdp.state_index("sb");
    const StrategySearchResult r = pb_eq1(mdp, s, sb);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(lmc_pb_eq1(induce(mdp, *r.witness), s, sb));
    CHECK(pb_eq1(mdp, s, s).answer == Answer::No);
  }

  SUBCASE("search guard throws") {
    const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
    CHECK_THROWS_AS(pb_eq1(mdp, mdp.state_index("s"), mdp.state_index("t"), 2), GuardExceeded);
    CHECK_THROWS_AS(pb_eq1(mdp, mdp.state_index("s"), mdp.state_index("t"), 20), GuardExceeded);
  }
}

TEST_CASE("strategy search: can the pair be kept below distance one") {
  SUBCASE("uniform strategy works when a diagonal meeting point exists") {
    const Mdp sep = fixtures::mdp_randomized_separation();
    const int s = sep.state_index("s"), t = sep.state_index("t");
    const StrategySearchResult r = pb_lt1(sep, s, t);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(!lmc_pb_eq1(induce(sep, *r.witness), s, t));
    CHECK(r.candidates == 0);  // settled by the uniform fast path
  }

  SUBCASE("uniform fast path on the absorbing-tails fixture") {
    const Mdp mdp = fixtures::mdp_unique_half_half_merge();
    const int s = mdp.state_index("s"), t = mdp.state_index("t");
    const StrategySearchResult r = pb_lt1(mdp, s, t);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(!lmc_pb_eq1(induce(mdp, *r.witness), s, t));
    CHECK(r.candidates == 0);  // no partition enumeration needed
  }

  SUBCASE("partition search needed when the uniform strategy maxes the distance") {
    const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
    const int s = mdp.state_index("s"), t = mdp.state_index("t");
    CHECK(lmc_pb_eq1(induce(mdp, uniform_strategy(mdp)), s, t));  // fast path must fail
    const StrategySearchResult r = pb_lt1(mdp, s, t);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(!lmc_pb_eq1(induce(mdp, *r.witness), s, t));
    CHECK(r.candidates > 0);
  }

  SUBCASE("loopback fixture: uniform keeps the pair together") {
    const Mdp mdp = fixtures::mdp_loopback_half_half();
    const int s = mdp.state_index("s"), t = mdp.state_index("t");
    const StrategySearchResult r = pb_lt1(mdp, s, t);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(!lmc_pb_eq1(induce(mdp, *r.witness), s, t));
    // while both deterministic strategies push the distance to one
    for (const MdStrategy& md : all_md(mdp)) {
      CHECK(lmc_pb_eq1(induce(mdp, strategy_from_md(mdp, md)), s, t));
    }
  }

  SUBCASE("same state trivially yes, distinct labels trivially no") {
    const Mdp mdp = fixtures::mdp_unique_half_half_merge();
    CHECK(pb_lt1(mdp, 0, 0).answer == Answer::Yes);
    CHECK(pb_lt1(mdp, mdp.state_index("s"), mdp.state_index("sb")).answer == Answer::No);
  }

  SUBCASE("partition guard throws when the fast path cannot settle it") {
    const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
    CHECK_THROWS_AS(pb_lt1(mdp, mdp.state_index("s"), mdp.state_index("t"), 2), GuardExceeded);
  }
}

TEST_CASE("deterministic screen for the total-variation problems") {
  const Mdp loop = fixtures::mdp_loopback_half_half();
  const int s = loop.state_index("s"), t = loop.state_index("t");
  const Dist ds = Dist::dirac(loop.n(), s), dt = Dist::dirac(loop.n(), t);

  SUBCASE("distance-one hit on the first deterministic strategy") {
    const MdScreenResult r = md_underapprox(loop, TvProblem::Eq1, ds, dt);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(r.tried == 1);
    CHECK(!lmc_tv_lt1(induce(loop, strategy_from_md(loop, *r.witness)), ds, dt));
  }

  SUBCASE("no deterministic strategy equalizes the traces here") {
    const MdScreenResult r = md_underapprox(loop, TvProblem::Eq0, ds, dt);
    CHECK(r.answer == Answer::Unknown);
    CHECK(!r.witness.has_value());
    CHECK(r.tried == 2);  // both deterministic strategies exhausted
  }

  SUBCASE("trace-equalizing deterministic strategy is found and verified") {
    const Mdp sep = fixtures::mdp_randomized_separation();
    const Dist du = Dist::dirac(sep.n(), sep.state_index("s"));
    const Dist dv = Dist::dirac(sep.n(), sep.state_index("t"));
    const MdScreenResult r = md_underapprox(sep, TvProblem::Eq0, du, dv);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    CHECK(r.tried == 1);
    CHECK(lmc_trace_equiv(induce(sep, strategy_from_md(sep, *r.witness)), du, dv));
  }

  SUBCASE("equal initial distributions hit immediately for distance zero") {
    const MdScreenResult r = md_underapprox(loop, TvProblem::Eq0, ds, ds);
    CHECK(r.answer == Answer::Yes);
    CHECK(r.tried == 1);
  }

  SUBCASE("below-one hit under every deterministic strategy of the mixing fixture") {
    const Mdp mdp = fixtures::mdp_distance_one_needs_mixing();
    const Dist du = Dist::dirac(mdp.n(), mdp.state_index("s"));
    const Dist dv = Dist::dirac(mdp.n(), mdp.state_index("t"));
    CHECK(md_underapprox(mdp, TvProblem::Lt1, du, dv).answer == Answer::Yes);
    // and the distance-one screen exhausts: mixing is genuinely required
    const MdScreenResult r = md_underapprox(mdp, TvProblem::Eq1, du, dv);
    CHECK(r.answer == Answer::Unknown);
    CHECK(r.tried == 2);
  }

  SUBCASE("screen guard throws") {
    CHECK_THROWS_AS(md_underapprox(loop, TvProblem::Eq0, ds, dt, 1), GuardExceeded);
  }
}

TEST_CASE("distance layers agree with each other on random models") {
  fixtures::Rng rng(515151);
  int lt1_no = 0, eq0_yes = 0, eq1_yes = 0;
  for (int iter = 0; iter < 40; ++iter) {
    const Mdp mdp = fixtures::random_mdp(rng, 4, 2, 2);
    const int s = static_cast<int>(rng.below(mdp.n()));
    const int t = static_cast<int>(rng.below(mdp.n()));
    const StrategySearchResult r0 = pb_eq0(mdp, s, t, 1u << 20);
    const StrategySearchResult r1 = pb_lt1(mdp, s, t, 1u << 20);
    const StrategySearchResult re = pb_eq1(mdp, s, t, 1u << 20);

    if (r0.answer == Answer::Yes) {
      REQUIRE(r0.witness.has_value());
      CHECK(lmc_bisim(induce(mdp, *r0.witness)).same_block(s, t));
      CHECK(r1.answer == Answer::Yes);  // distance zero is below one
      ++eq0_yes;
    }
    if (r1.answer == Answer::Yes) {
      REQUIRE(r1.witness.has_value());
      CHECK(!lmc_pb_eq1(induce(mdp, *r1.witness), s, t));
    } else {
      // every strategy pushes the distance to one, so a witness exists
      CHECK(re.answer == Answer::Yes);
      CHECK(lmc_pb_eq1(induce(mdp, uniform_strategy(mdp)), s, t));
      ++lt1_no;
    }
    if (re.answer == Answer::Yes) {
      REQUIRE(re.witness.has_value());
      CHECK(lmc_pb_eq1(induce(mdp, *re.witness), s, t));
      ++eq1_yes;
    }
  }
  // The sample exercises every branch.
  CHECK(eq0_yes > 0);
  CHECK(eq1_yes > 0);
  CHECK(lt1_no > 0);
}

TEST_CASE("bisimilarity distance dominates total variation on sampled chains") {
  fixtures::Rng rng(616161);
  int dominated = 0, equiv_seen = 0;
  for (int iter = 0; iter < 60; ++iter) {
    const Mdp mdp = fixtures::random_mdp(rng, 4, 2, 2);
    const Strategy a = fixtures::random_positive_strategy(rng, mdp);
    const Lmc chain = induce(mdp, a);
    const int s = static_cast<int>(rng.below(chain.n()));
    const int t = static_cast<int>(rng.below(chain.n()));
    const Dist ds = Dist::dirac(chain.n(), s), dt = Dist::dirac(chain.n(), t);
    if (!lmc_pb_eq1(chain, s, t)) {
      CHECK(lmc_tv_lt1(chain, ds, dt));
      ++dominated;
    }
    if (lmc_trace_equiv(chain, ds, dt)) {
      CHECK(lmc_tv_lt1(chain, ds, dt));
      ++equiv_seen;
    }
  }
  CHECK(dominated > 0);
  CHECK(equiv_seen > 0);
}
