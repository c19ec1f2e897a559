#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "tgminer/oracle.hpp"

using namespace tgminer;
using tgtest::make_graph;

namespace {

Extension seed(const char* a, const char* b) {
  return {GrowthKind::Seed, kNoNode, kNoNode, Label::intern(a), Label::intern(b)};
}

std::set<std::vector<NodeId>> node_maps(const std::vector<Embedding>& ms) {
  std::set<std::vector<NodeId>> out;
  for (const auto& m : ms) out.insert(m.nodeMap);
  return out;
}

std::multiset<std::pair<std::vector<NodeId>, std::vector<Timestamp>>> as_set(const std::vector<Embedding>& ms) {
  std::multiset<std::pair<std::vector<NodeId>, std::vector<Timestamp>>> out;
  for (const auto& m : ms) out.insert({m.nodeMap, m.timeMap});
  return out;
}

}  // namespace

TEST(Extensions, SeedsOfEmptyPattern) {
  std::vector<TemporalGraph> gs{make_graph("g", {"A", "B", "C"}, {{0, 1, 1}, {1, 2, 2}})};
  auto xs = enumerate_extensions(EmbeddingTable::root(gs), gs);
  ASSERT_EQ(xs.size(), 2u);
  EXPECT_EQ(xs[0].kind, GrowthKind::Seed);
  EXPECT_EQ(xs[0].srcLabel.text(), "A");
  EXPECT_EQ(xs[1].srcLabel.text(), "B");
  EXPECT_EQ(xs[1].dstLabel.text(), "C");
}

TEST(Extensions, ForwardFromSingleEdge) {
  std::vector<TemporalGraph> gs{make_graph("g", {"A", "B", "C"}, {{0, 1, 1}, {1, 2, 2}})};
  auto t = extend_embeddings(EmbeddingTable::root(gs), seed("A", "B"), gs);
  auto xs = enumerate_extensions(t, gs);
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_EQ(xs[0].kind, GrowthKind::Forward);
  EXPECT_EQ(xs[0].src, 1u);
  EXPECT_EQ(xs[0].dstLabel.text(), "C");
}

TEST(Extensions, InwardMultiEdge) {
  std::vector<TemporalGraph> gs{make_graph("g", {"A", "B"}, {{0, 1, 1}, {0, 1, 5}})};
  auto t = extend_embeddings(EmbeddingTable::root(gs), seed("A", "B"), gs);
  auto xs = enumerate_extensions(t, gs);
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_EQ(xs[0].kind, GrowthKind::Inward);
  auto p = grow(grow({}, seed("A", "B")), xs[0]);
  EXPECT_EQ(p.edges[1], (TemporalEdge{0, 1, 2}));
}

TEST(Grow, Examples) {
  auto p = grow({}, seed("A", "B"));
  EXPECT_EQ(pattern_text(p), "0:A>1:B");
  auto f = grow(p, {GrowthKind::Forward, 1, kNoNode, Label::intern("B"), Label::intern("C")});
  EXPECT_EQ(f.edges[1], (TemporalEdge{1, 2, 2}));
  EXPECT_EQ(f.labels[2].text(), "C");
  auto b = grow(p, {GrowthKind::Backward, kNoNode, 0, Label::intern("C"), Label::intern("A")});
  EXPECT_EQ(b.edges[1], (TemporalEdge{2, 0, 2}));
  EXPECT_TRUE(is_pattern(b));
}

TEST(Grow, InvalidExtensions) {
  auto p = grow({}, seed("A", "B"));
  EXPECT_THROW(grow(p, seed("A", "B")), Error);
  EXPECT_THROW(grow(p, {GrowthKind::Forward, 7, kNoNode, {}, Label::intern("C")}), Error);
  EXPECT_THROW(grow(p, {GrowthKind::Inward, 0, 9, {}, {}}), Error);
  EXPECT_THROW(grow(p, {GrowthKind::Backward, 0, 1, Label::intern("C"), {}}), Error);
}

TEST(ExtendEmbeddings, RequiresLaterTimestamps) {
  // A match at data times 4,5,6 can only extend with edges after 6.
  std::vector<TemporalGraph> gs{
      make_graph("g", {"A", "B", "C", "D"}, {{3, 0, 1}, {0, 1, 4}, {1, 2, 5}, {2, 3, 6}, {3, 0, 9}})};
  auto p = make_graph("p", {"A", "B", "C", "D"}, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}});
  auto t = build_table(p, gs);
  auto xs = enumerate_extensions(t, gs);
  ASSERT_EQ(xs.size(), 1u);
  auto child = extend_embeddings(t, xs[0], gs);
  auto ms = child.embeddings_of(0, gs[0]);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].timeMap, (std::vector<Timestamp>{4, 5, 6, 9}));
}

TEST(ExtendEmbeddings, NoRealisingEdge) {
  std::vector<TemporalGraph> gs{make_graph("g", {"A", "B"}, {{0, 1, 1}})};
  auto t = extend_embeddings(EmbeddingTable::root(gs), seed("A", "C"), gs);
  EXPECT_EQ(t.supporting_graphs(), 0u);
}

TEST(ExtendEmbeddings, MatchesOracleEnumeration) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    std::vector<TemporalGraph> gs;
    for (int k = 0; k < 3; ++k) gs.push_back(tgtest::random_graph(rng, 4 + rng() % 3, 4 + rng() % 6, 2));
    auto p = tgtest::random_subpattern(rng, gs[0], 1 + rng() % 4);
    auto t = build_table(p, gs);
    for (std::uint32_t g = 0; g < gs.size(); ++g) {
      auto ours = t.embeddings_of(g, gs[g]);
      for (const auto& m : ours) EXPECT_TRUE(verify_embedding(p, gs[g], m));
      EXPECT_EQ(as_set(ours), as_set(oracle_embeddings(p, gs[g]))) << i << "/" << g;
    }
  }
}

TEST(ExtendEmbeddings, CapTruncatesButKeepsSupport) {
  RawGraph raw{"g", {"A"}, {}};
  for (int i = 0; i < 30; ++i) raw.labels.push_back("B");
  for (NodeId i = 0; i < 30; ++i) raw.edges.push_back({0, i + 1, i + 1});
  std::vector<TemporalGraph> gs{validate(raw)};
  auto t = extend_embeddings(EmbeddingTable::root(gs), seed("A", "B"), gs, 10);
  EXPECT_TRUE(t.truncated());
  EXPECT_EQ(t.supporting_graphs(), 1u);
  EXPECT_EQ(t.total_embeddings(), 10u);
}

namespace {

void dfs(const TemporalPattern& p, const EmbeddingTable& t, std::span<const TemporalGraph> gs, std::size_t maxEdges,
         std::vector<TemporalPattern>& seen) {
  if (p.edge_count() > 0) seen.push_back(p);
  if (p.edge_count() == maxEdges) return;
  for (auto& c : expand(t, gs, kDefaultEmbeddingCap)) {
    auto q = grow(p, c.ext);
    ASSERT_TRUE(is_pattern(q));
    dfs(q, c.table, gs, maxEdges, seen);
  }
}

}  // namespace

TEST(Search, CompleteWithoutRepetition) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<TemporalGraph> gs;
    for (int k = 0; k < 3; ++k) gs.push_back(tgtest::random_graph(rng, 3 + rng() % 3, 3 + rng() % 4, 2 + seed % 2));
    std::vector<TemporalPattern> visited;
    dfs({}, EmbeddingTable::root(gs), gs, 4, visited);
    std::set<std::string> keys;
    for (const auto& p : visited) EXPECT_TRUE(keys.insert(oracle_key(p)).second) << pattern_text(p);
    std::set<std::string> expected;
    for (auto& [k, p] : oracle_enumerate_patterns(gs, 4)) expected.insert(k);
    EXPECT_EQ(keys, expected) << "seed " << seed;
  }
}

TEST(Search, ChildOrderIsDeterministic) {
  std::vector<TemporalGraph> gs{make_graph("g", {"B", "A", "C"}, {{1, 0, 1}, {0, 2, 2}, {1, 2, 3}})};
  auto xs = enumerate_extensions(EmbeddingTable::root(gs), gs);
  EXPECT_TRUE(std::is_sorted(xs.begin(), xs.end(), extension_less));
  EXPECT_EQ(node_maps(extend_embeddings(EmbeddingTable::root(gs), xs[0], gs).embeddings_of(0, gs[0])).size(), 1u);
}
