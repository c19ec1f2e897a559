#include <gtest/gtest.h>

#include "support.hpp"
#include "tgminer/oracle.hpp"

using namespace tgminer;
using tgtest::make_graph;

namespace {

std::vector<NodeId> nodes_of(const std::vector<SeqNode>& s) {
  std::vector<NodeId> out;
  for (const auto& n : s) out.push_back(n.node);
  return out;
}

}  // namespace

TEST(Encode, Chain) {
  auto g = make_graph("g", {"A", "B", "C"}, {{0, 1, 1}, {1, 2, 2}});
  auto enc = encode(g);
  EXPECT_EQ(nodes_of(enc.nodeSeq), (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(enc.edgeSeq, (std::vector<SeqEdge>{{0, 1}, {1, 2}}));
  EXPECT_EQ(nodes_of(enc.enhSeq), (std::vector<NodeId>{0, 1, 2}));
}

TEST(Encode, SingleEdge) {
  auto enc = encode(make_graph("g", {"A", "B"}, {{0, 1, 1}}));
  EXPECT_EQ(nodes_of(enc.nodeSeq), (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(nodes_of(enc.enhSeq), (std::vector<NodeId>{0, 1}));
}

TEST(Encode, RepeatedNodeInEnhanced) {
  auto enc = encode(make_graph("g", {"A", "B", "C"}, {{0, 1, 1}, {2, 1, 2}}));
  EXPECT_EQ(nodes_of(enc.nodeSeq), (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(nodes_of(enc.enhSeq), (std::vector<NodeId>{0, 1, 2, 1}));
}

TEST(Encode, EnhancedLengthBound) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    auto g = tgtest::random_graph(rng, 2 + rng() % 8, 1 + rng() % 20, 4);
    EXPECT_LE(encode(g).enhSeq.size(), 2 * g.edge_count());
  }
}

TEST(Subsequence, Examples) {
  std::vector<char> ac{'A', 'C'}, ca{'C', 'A'}, abc{'A', 'B', 'C'}, none;
  EXPECT_TRUE(is_subsequence<char>(ac, abc));
  EXPECT_FALSE(is_subsequence<char>(ca, abc));
  EXPECT_TRUE(is_subsequence<char>(none, abc));
  EXPECT_TRUE(is_subsequence<char>(none, none));
}

TEST(SubgraphTest, FigureEightInstance) {
  // Nodes 1..6 of the figure become 0..5.
  auto g2 = make_graph("g2", {"A", "B", "C", "E", "B", "D"}, {{0, 1, 1}, {2, 3, 2}, {0, 4, 3}, {4, 5, 4}, {3, 5, 5}});
  auto g1 = make_graph("g1", {"A", "B", "D", "E"}, {{0, 1, 1}, {1, 2, 2}, {3, 2, 3}});
  auto m = temporal_subgraph_test(g1, g2);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->nodeMap, (std::vector<NodeId>{0, 4, 5, 3}));
  EXPECT_EQ(m->timeMap, (std::vector<Timestamp>{3, 4, 5}));
  EXPECT_TRUE(verify_embedding(g1, g2, *m));
}

TEST(SubgraphTest, Reflexive) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    auto g = tgtest::random_graph(rng, 6, 10, 3);
    auto m = temporal_subgraph_test(g, g);
    ASSERT_TRUE(m);
    EXPECT_TRUE(verify_embedding(g, g, *m));
  }
  auto g = make_graph("g", {"A", "B", "C"}, {{0, 1, 1}, {1, 2, 2}});
  EXPECT_EQ(temporal_subgraph_test(g, g)->nodeMap, (std::vector<NodeId>{0, 1, 2}));
}

TEST(SubgraphTest, OrderMatters) {
  auto data = make_graph("d", {"A", "B", "C"}, {{1, 2, 1}, {0, 1, 2}});
  auto p = make_graph("p", {"A", "B", "C"}, {{0, 1, 1}, {1, 2, 2}});
  EXPECT_FALSE(temporal_subgraph_test(p, data));
  EXPECT_FALSE(oracle_subgraph_test(p, data));
}

TEST(SubgraphTest, AgreesWithOracleUnderAllToggles) {
  std::mt19937_64 rng(17);
  std::size_t positives = 0;
  for (int i = 0; i < 400; ++i) {
    const std::size_t labels = 1 + rng() % 4;
    auto g2 = tgtest::random_graph(rng, 3 + rng() % 6, 1 + rng() % 12, labels);
    // Half the patterns come from g2 itself so both verdicts are exercised.
    TemporalPattern g1 = (i % 2) ? tgtest::random_subpattern(rng, g2, 1 + rng() % 6)
                                 : tgtest::random_pattern(rng, 1 + rng() % 6, labels);
    const bool expected = oracle_subgraph_test(g1, g2).has_value();
    positives += expected;
    SubisoTarget target(g2);
    for (int mask = 0; mask < 8; ++mask) {
      SubisoOptions o{.labelSequenceTest = bool(mask & 1), .localInfoMatch = bool(mask & 2), .prefixPruning = bool(mask & 4)};
      auto m = temporal_subgraph_test(g1, target, o);
      ASSERT_EQ(m.has_value(), expected) << "case " << i << " mask " << mask;
      if (m) EXPECT_TRUE(verify_embedding(g1, g2, *m));
    }
  }
  EXPECT_GT(positives, 100u);
  EXPECT_LT(positives, 350u);
}

TEST(SubgraphTest, LabelRejectNeverChangesVerdict) {
  auto data = make_graph("d", {"A", "B"}, {{0, 1, 1}});
  auto p = make_graph("p", {"A", "C"}, {{0, 1, 1}});
  SubisoStats stats;
  EXPECT_FALSE(temporal_subgraph_test(p, data, {}, &stats));
  EXPECT_EQ(stats.labelRejects, 1u);
}

TEST(NodeMappings, DistinctMapsMatchOracle) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    auto g2 = tgtest::random_graph(rng, 5, 9, 2);
    auto g1 = tgtest::random_subpattern(rng, g2, 1 + rng() % 3);
    std::set<std::vector<NodeId>> expected;
    for (const auto& m : oracle_embeddings(g1, g2)) expected.insert(m.nodeMap);
    std::set<std::vector<NodeId>> got;
    SubisoTarget target(g2);
    enumerate_node_mappings(g1, target, 1000, [&](const Embedding& m) {
      EXPECT_TRUE(verify_embedding(g1, g2, m));
      EXPECT_TRUE(got.insert(m.nodeMap).second);
      return true;
    });
    EXPECT_EQ(got, expected) << i;
  }
}
