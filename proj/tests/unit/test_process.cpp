#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "dfp/errors.hpp"
#include "dfp/oracle.hpp"
#include "dfp/process.hpp"
#include "invariants.hpp"

using namespace dfp;
using dfp::support::delta_violation;
using dfp::support::from_edges;
using dfp::support::invariant_violation;

TEST(Process, InitCounts) {
  ProcessState s(4, 9);
  EXPECT_EQ(s.counters().q0, 6u);
  EXPECT_EQ(s.counters().q1, 0u);
  EXPECT_EQ(s.steps(), 0u);
  EXPECT_EQ(ProcessState(2, 1).counters().q0, 1u);
  EXPECT_THROW(ProcessState(1, 1), InvalidParameter);
  EXPECT_THROW(ProcessState(0, 1), InvalidParameter);
}

TEST(Process, ClassifyExamples) {
  ProcessState empty(5, 1);
  EXPECT_EQ(empty.classify(0, 4), PairState::O0);
  EXPECT_THROW(empty.classify(2, 2), InvalidParameter);

  auto path = from_edges(3, {{0, 2}, {2, 1}});
  EXPECT_EQ(path.classify(0, 1), PairState::O1);
  EXPECT_EQ(path.state(0, 1), PairState::O1);

  auto cycle = from_edges(4, {{0, 2}, {2, 1}, {1, 3}, {3, 0}});
  EXPECT_EQ(cycle.classify(0, 1), PairState::C);

  auto tri = from_edges(4, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(tri.classify(0, 3), PairState::O0);
  auto tri_tail = from_edges(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  EXPECT_EQ(tri_tail.classify(0, 3), PairState::C);
  EXPECT_EQ(tri_tail.state(0, 3), PairState::C);
}

TEST(Process, FirstEdge) {
  ProcessState s(4, 1);
  const auto d = s.apply_edge(encode_pair(1, 2));
  EXPECT_EQ(d.prior, PairState::O0);
  EXPECT_TRUE(d.transitions.empty());
  EXPECT_EQ(s.state(1, 2), PairState::E0);
  EXPECT_EQ(s.counters().q0, 5u);
  EXPECT_EQ(s.counters().blue, 1u);
  EXPECT_THROW(s.apply_edge(encode_pair(1, 2)), InvalidTransition);
}

TEST(Process, ClosingATriangle) {
  auto s = from_edges(4, {{0, 1}, {1, 2}});
  ASSERT_EQ(s.state(0, 2), PairState::O1);
  const auto d = s.apply_edge(encode_pair(0, 2));
  EXPECT_EQ(d.prior, PairState::O1);
  ASSERT_TRUE(d.witness.has_value());
  EXPECT_EQ(*d.witness, 1u);
  for (auto [u, v] : {std::pair{0u, 1u}, {1u, 2u}, {0u, 2u}}) EXPECT_EQ(s.state(u, v), PairState::E1);
  EXPECT_EQ(s.apex(encode_pair(0, 2)), 1u);
  EXPECT_EQ(s.apex(encode_pair(0, 1)), 2u);
  EXPECT_EQ(s.apex(encode_pair(1, 2)), 0u);
  EXPECT_TRUE(s.is_green(encode_pair(0, 2)));
  EXPECT_EQ(s.counters().q0, 3u);
  EXPECT_EQ(s.counters().q1, 0u);
  EXPECT_EQ(s.counters().green, 1u);
  EXPECT_EQ(std::vector<PairState>(s.state_table().begin(), s.state_table().end()),
            oracle::naive_classify_all(oracle::NaiveGraph::from_state(s)));
}

TEST(Process, CherryThenTriangleMatchesOracle) {
  auto s = from_edges(5, {{0, 1}, {0, 2}});
  s.apply_edge(encode_pair(1, 2));
  EXPECT_EQ(s.state(3, 0), PairState::O0);
  EXPECT_EQ(std::vector<PairState>(s.state_table().begin(), s.state_table().end()),
            oracle::naive_classify_all(oracle::NaiveGraph::from_state(s)));
}

TEST(Process, SampleOpenOnTinyAndTerminated) {
  ProcessState s(2, 5);
  const auto p = s.sample_open();
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(*p, encode_pair(0, 1));
  s.apply_edge(*p);
  EXPECT_TRUE(s.terminated());
  EXPECT_FALSE(s.sample_open().has_value());
  EXPECT_FALSE(s.sample_open_canonical().has_value());
}

TEST(Process, SampleOpenIsUniform) {
  // empty graph on 5 vertices: 10 open pairs
  ProcessState s(5, 77);
  ASSERT_EQ(s.open_count(), 10u);
  std::map<std::uint32_t, std::uint64_t> hits;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) ++hits[s.sample_open()->value];
  ASSERT_EQ(hits.size(), 10u);
  double chi2 = 0;
  const double expected = draws / 10.0;
  for (const auto& [p, h] : hits) chi2 += (h - expected) * (h - expected) / expected;
  // chi-square with 9 degrees of freedom: P(X > 27.877) = 0.001
  EXPECT_LT(chi2, 27.877);
}

TEST(Process, InvariantsEveryStep) {
  for (Vertex n : {5u, 9u, 17u, 40u, 60u}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ProcessState s(n, seed);
      while (auto p = s.sample_open()) {
        const Counters before = s.counters();
        const auto d = s.apply_edge(*p);
        ASSERT_EQ(delta_violation(d, before, s.counters()), std::nullopt);
        ASSERT_EQ(invariant_violation(s), std::nullopt) << "n=" << n << " seed=" << seed;
      }
      // maximal: every non-edge closed
      for (const auto c : s.state_table()) EXPECT_TRUE(is_edge(c) || c == PairState::C);
    }
  }
}

TEST(Process, TransitionsAreComplete) {
  // replaying the delta onto the old table must give the new table
  ProcessState s(30, 3);
  while (auto p = s.sample_open()) {
    std::vector<PairState> table(s.state_table().begin(), s.state_table().end());
    const auto d = s.apply_edge(*p);
    table[d.chosen.value] = d.prior == PairState::O0 ? PairState::E0 : PairState::E1;
    std::map<std::uint32_t, int> seen;
    for (const auto& t : d.transitions) {
      ASSERT_EQ(table[t.pair.value], t.from);
      ASSERT_EQ(++seen[t.pair.value], 1);
      table[t.pair.value] = t.to;
    }
    ASSERT_TRUE(std::equal(table.begin(), table.end(), s.state_table().begin()));
  }
}

TEST(Process, Determinism) {
  auto a = support::random_state(80, 42, 100000);
  auto b = support::random_state(80, 42, 100000);
  EXPECT_EQ(a.edges(), b.edges());
  EXPECT_EQ(a.counters(), b.counters());
  auto c = support::random_state(80, 43, 100000);
  EXPECT_NE(a.edges(), c.edges());
}

TEST(Process, ScaledTime) {
  ProcessState s(100, 1);
  for (int k = 0; k < 500; ++k) s.apply_edge(*s.sample_open());
  EXPECT_DOUBLE_EQ(s.scaled_time(), 500.0 / 1000.0);
}
