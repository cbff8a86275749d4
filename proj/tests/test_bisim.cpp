#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "lmdp/bisim.hpp"

using namespace lmdp;

namespace {

template <class M>
Partition named_partition(const M& m, std::vector<std::vector<std::string>> name_blocks) {
  std::vector<std::vector<int>> blocks;
  for (const auto& nb : name_blocks) {
    std::vector<int> b;
    for (const auto& name : nb) b.push_back(m.state_index(name));
    blocks.push_back(std::move(b));
  }
  return Partition::from_blocks(m.n(), std::move(blocks));
}

std::vector<Rat> mass_into_blocks(const Lmc& c, const Partition& x, int s) {
  std::vector<Rat> r(x.size(), Rat(0));
  for (int t = 0; t < c.n(); ++t) r[x.block_of[t]] += c.row(s)[t];
  return r;
}

std::vector<MdStrategy> all_md(const Mdp& m) {
  std::vector<MdStrategy> out;
  MdStrategy a;
  a.choice.assign(m.n(), 0);
  while (true) {
    out.push_back(a);
    int s = m.n() - 1;
    while (s >= 0) {
      if (++a.choice[s] < m.action_count(s)) break;
      a.choice[s] = 0;
      --s;
    }
    if (s < 0) return out;
  }
}

}  // namespace

TEST_CASE("partitions canonicalize and validate") {
  Partition p = Partition::from_blocks(4, {{3, 1}, {2, 0}});
  CHECK(p.blocks == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
  CHECK(p.block_of == std::vector<int>{0, 1, 0, 1});
  CHECK(p.same_block(0, 2));
  CHECK(!p.same_block(0, 1));
  CHECK(Partition::trivial(3).size() == 1);
  CHECK_THROWS_AS(Partition::from_blocks(3, {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Partition::from_blocks(3, {{0, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Partition::from_blocks(3, {{0, 1, 2, 3}}), std::invalid_argument);
}

TEST_CASE("chain bisimilarity separates early and late branching") {
  Lmc c = fixtures::lmc_branch_timing_pair();
  Partition p = lmc_bisim(c);
  Partition expect = named_partition(
      c, {{"x0"}, {"x1"}, {"x2"}, {"x3", "y3"}, {"x4", "y4"}, {"y0"}, {"y1"}});
  CHECK(p == expect);
}

TEST_CASE("chain bisimilarity is the coarsest stable partition") {
  fixtures::Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    Mdp m = fixtures::random_mdp(rng, 6, 2, 2);
    Lmc c = induce(m, fixtures::random_positive_strategy(rng, m));
    Partition p = lmc_bisim(c);
    for (int s = 0; s < c.n(); ++s)
      for (int t = s + 1; t < c.n(); ++t) {
        if (p.same_block(s, t)) {
          CHECK(c.label(s) == c.label(t));
          CHECK(mass_into_blocks(c, p, s) == mass_into_blocks(c, p, t));
        } else if (c.label(s) == c.label(t)) {
          CHECK(mass_into_blocks(c, p, s) != mass_into_blocks(c, p, t));
        }
      }
  }
}

TEST_CASE("optimistic refinement reproduces the worked example") {
  Mdp m = fixtures::mdp_randomized_separation();
  RefinementTrace trace = optimistic_refine(m);
  REQUIRE(trace.partitions.size() == 5);
  CHECK(trace.partitions[0] == Partition::trivial(m.n()));
  CHECK(trace.partitions[1] ==
        named_partition(m, {{"v"}, {"s", "t", "sa", "sb", "ta", "tb", "q1", "q2", "q3", "u"}}));
  CHECK(trace.partitions[2] ==
        named_partition(m, {{"v"}, {"q2"}, {"q3"}, {"s", "t", "sa", "sb", "ta", "tb", "q1", "u"}}));
  CHECK(trace.partitions[3] ==
        named_partition(m, {{"v"}, {"q2"}, {"q3"}, {"sa"}, {"sb"}, {"ta"}, {"tb"},
                            {"s", "t", "q1", "u"}}));
  CHECK(trace.partitions[4] ==
        named_partition(m, {{"v"}, {"q2"}, {"q3"}, {"sa"}, {"sb"}, {"ta"}, {"tb"},
                            {"s"}, {"t"}, {"q1", "u"}}));
  CHECK(!trace.fixpoint().same_block(m.state_index("s"), m.state_index("t")));
}

TEST_CASE("each refinement step is the quotient of the one-step relation") {
  fixtures::Rng rng(22);
  std::vector<Mdp> models = {fixtures::mdp_randomized_separation(),
                             fixtures::mdp_distance_one_needs_mixing()};
  for (int trial = 0; trial < 15; ++trial) models.push_back(fixtures::random_mdp(rng, 5, 3, 2));
  for (const Mdp& m : models) {
    RefinementTrace trace = optimistic_refine(m);
    for (std::size_t i = 0; i + 1 < trace.partitions.size(); ++i)
      for (int s = 0; s < m.n(); ++s)
        for (int t = 0; t < m.n(); ++t)
          CHECK(trace.partitions[i + 1].same_block(s, t) ==
                equiv_x(m, trace.partitions[i], s, t));
    // The fixpoint is stable under one more application.
    for (int s = 0; s < m.n(); ++s)
      for (int t = 0; t < m.n(); ++t)
        CHECK(trace.fixpoint().same_block(s, t) == equiv_x(m, trace.fixpoint(), s, t));
  }
}

TEST_CASE("single-action models refine exactly like their chain") {
  fixtures::Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Mdp m = fixtures::random_mdp(rng, 6, 1, 2);
    RefinementTrace trace = optimistic_refine(m);
    Lmc c = induce(m, uniform_strategy(m));
    CHECK(trace.fixpoint() == lmc_bisim(c));
  }
}

TEST_CASE("collected numbers of the worked example are one and two") {
  Mdp m = fixtures::mdp_randomized_separation();
  std::set<Int> n = collect_denominators(m, optimistic_refine(m));
  CHECK(n == std::set<Int>{1, 2});
}

TEST_CASE("prime assignment avoids factors and repeats") {
  PrimeAssignment pa = prime_assignment(11, {Int(1), Int(2)});
  CHECK(pa.prime_of ==
        std::vector<Int>{3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37});
  PrimeAssignment pb = prime_assignment(3, {Int(2), Int(15)});
  CHECK(pb.prime_of == std::vector<Int>{7, 11, 13});
  PrimeAssignment pc = prime_assignment(2, {});
  CHECK(pc.prime_of == std::vector<Int>{2, 3});
}

TEST_CASE("partial strategy weights exactly the splitting states") {
  Mdp m = fixtures::mdp_randomized_separation();
  RefinementTrace trace = optimistic_refine(m);

  PrimeAssignment canonical = prime_assignment(m.n(), collect_denominators(m, trace));
  PartialStrategy part = build_partial_strategy(m, trace, canonical);
  int q2 = m.state_index("q2");
  for (int s = 0; s < m.n(); ++s) CHECK(part.w[s].has_value() == (s == q2));
  CHECK(*part.w[q2] == std::vector<Rat>{Rat(1, 5), Rat(4, 5)});

  // Any coprime, pairwise distinct primes work; three matches the text's pick.
  PrimeAssignment handpicked;
  for (int s = 0; s < m.n(); ++s) handpicked.prime_of.push_back(101 + 2 * s);
  handpicked.prime_of[q2] = 3;
  PartialStrategy part3 = build_partial_strategy(m, trace, handpicked);
  CHECK(*part3.w[q2] == std::vector<Rat>{Rat(1, 3), Rat(2, 3)});

  Strategy beta = minimizing_strategy(m);
  validate_strategy(m, beta);
  CHECK(beta.w[q2] == std::vector<Rat>{Rat(1, 5), Rat(4, 5)});
  CHECK(beta.w[m.state_index("s")] == std::vector<Rat>{Rat(1)});
}

TEST_CASE("witness search splits the hand-built pairs") {
  for (auto make : {fixtures::mdp_randomized_separation, fixtures::mdp_distance_one_needs_mixing,
                    fixtures::mdp_unique_half_half_merge, fixtures::mdp_loopback_half_half}) {
    Mdp m = make();
    int s = m.state_index("s"), t = m.state_index("t");
    PbGt0Result r = pb_gt0(m, s, t);
    CHECK(r.answer == Answer::Yes);
    REQUIRE(r.witness.has_value());
    validate_strategy(m, *r.witness);
    CHECK(!lmc_bisim(induce(m, *r.witness)).same_block(s, t));
  }
}

TEST_CASE("identically wired states can never be split") {
  MdpBuilder b;
  b.state("s", "a").action("m", {{"x", Rat(1, 2)}, {"y", Rat(1, 2)}});
  b.state("t", "a").action("m", {{"x", Rat(1, 2)}, {"y", Rat(1, 2)}});
  b.state("x", "c").action("m", {{"x", 1}});
  b.state("y", "d").action("m", {{"y", 1}});
  Mdp m = b.build();
  CHECK(pb_gt0(m, m.state_index("s"), m.state_index("t")).answer == Answer::No);
  CHECK(pb_gt0(m, 0, 0).answer == Answer::No);
  CHECK(pb_gt0(m, m.state_index("x"), m.state_index("y")).answer == Answer::Yes);
}

TEST_CASE("split answers agree with sampled strategies") {
  fixtures::Rng rng(24);
  for (int trial = 0; trial < 25; ++trial) {
    Mdp m = fixtures::random_mdp(rng, 4, 2, 2);
    std::vector<Strategy> sample;
    for (const MdStrategy& a : all_md(m)) sample.push_back(strategy_from_md(m, a));
    for (int k = 0; k < 4; ++k) sample.push_back(fixtures::random_positive_strategy(rng, m));
    std::vector<Partition> parts;
    for (const Strategy& a : sample) parts.push_back(lmc_bisim(induce(m, a)));
    for (int s = 0; s < m.n(); ++s)
      for (int t = s + 1; t < m.n(); ++t) {
        PbGt0Result r = pb_gt0(m, s, t);
        bool sampled_split = false;
        for (const Partition& p : parts) sampled_split |= !p.same_block(s, t);
        if (r.answer == Answer::No) {
          CHECK(!sampled_split);
        } else if (sampled_split) {
          CHECK(r.answer == Answer::Yes);
        }
      }
  }
}

TEST_CASE("the completed strategy identifies as little as any sampled one") {
  fixtures::Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    Mdp m = fixtures::random_mdp(rng, 5, 3, 2);
    Partition minimal = lmc_bisim(induce(m, minimizing_strategy(m)));
    std::vector<Strategy> sample;
    for (int k = 0; k < 5; ++k) sample.push_back(fixtures::random_positive_strategy(rng, m));
    MdStrategy first;
    first.choice.assign(m.n(), 0);
    sample.push_back(strategy_from_md(m, first));
    for (const Strategy& a : sample) {
      Partition pa = lmc_bisim(induce(m, a));
      for (int s = 0; s < m.n(); ++s)
        for (int t = 0; t < m.n(); ++t)
          if (minimal.same_block(s, t)) CHECK(pa.same_block(s, t));
    }
  }
}
