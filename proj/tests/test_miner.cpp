#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "support.hpp"
#include "tgminer/oracle.hpp"
#include "tgminer/report.hpp"

using namespace tgminer;
using tgtest::make_graph;

namespace {

std::set<std::string> keys_of(const std::vector<ScoredPattern>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(oracle_key(p.pattern));
  return out;
}

std::set<std::string> keys_of(const std::map<std::string, TemporalPattern>& ps) {
  std::set<std::string> out;
  for (const auto& [k, p] : ps) out.insert(k);
  return out;
}

MiningConfig desk_config(PruningToggles t = {}) {
  MiningConfig cfg;
  cfg.maxEdges = 4;
  cfg.pruning = t;
  return cfg;
}

}  // namespace

TEST(Frequency, Examples) {
  EmbeddingTable t(2, 1);
  for (std::uint32_t g = 0; g < 3; ++g) t.per_graph().push_back({g, 1, {0, 1}, {0}, false});
  EXPECT_DOUBLE_EQ(frequency(t, 4), 0.75);
  EXPECT_DOUBLE_EQ(frequency(EmbeddingTable(2, 1), 4), 0.0);
  EmbeddingTable seven(2, 1);
  seven.per_graph().push_back({0, 7, std::vector<NodeId>(14, 0), std::vector<std::uint32_t>(7, 0), false});
  EXPECT_DOUBLE_EQ(frequency(seven, 2), 0.5);
}

TEST(Mine, SameGraphOnBothSides) {
  std::vector<TemporalGraph> gs{make_graph("g", {"A", "B", "C"}, {{0, 1, 1}, {1, 2, 2}, {2, 0, 3}})};
  auto r = mine(gs, gs, desk_config());
  EXPECT_NEAR(r.bestScore, 0.0, 1e-5);
  for (const auto& p : r.maximizers) EXPECT_EQ(p.freqP, p.freqN);
}

TEST(Mine, RejectsBadInput) {
  std::vector<TemporalGraph> gs{make_graph("g", {"A", "B"}, {{0, 1, 1}})};
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  EXPECT_EQ(code([&] { mine({}, gs, {}); }), ErrorCode::EmptyDataset);
  EXPECT_EQ(code([&] { mine(gs, {}, {}); }), ErrorCode::EmptyDataset);
  MiningConfig cfg;
  cfg.maxEdges = 0;
  EXPECT_EQ(code([&] { mine(gs, gs, cfg); }), ErrorCode::ConfigInvalid);
  cfg = {};
  cfg.topK = 0;
  EXPECT_EQ(code([&] { mine(gs, gs, cfg); }), ErrorCode::ConfigInvalid);
  cfg = {};
  cfg.minFreqP = 1.5;
  EXPECT_EQ(code([&] { mine(gs, gs, cfg); }), ErrorCode::ConfigInvalid);
}

TEST(Mine, MatchesOracleOnDeskInstances) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto in = tgtest::random_instance(seed);
    auto r = mine(in.positives, in.negatives, desk_config());
    auto o = oracle_best_score(in.positives, in.negatives, 4, ScoreFunction::log_ratio());
    EXPECT_EQ(r.bestScore, o.score) << "seed " << seed;
    EXPECT_EQ(keys_of(r.maximizers), keys_of(o.maximizers)) << "seed " << seed;
  }
}

TEST(Mine, OtherScoreFunctionsMatchOracle) {
  for (std::uint64_t seed = 100; seed < 108; ++seed) {
    auto in = tgtest::random_instance(seed);
    for (auto variant : {ScoreVariant::GTest, ScoreVariant::InfoGain}) {
      auto cfg = desk_config();
      cfg.scoreFn.variant = variant;
      auto r = mine(in.positives, in.negatives, cfg);
      auto o = oracle_best_score(in.positives, in.negatives, 4, cfg.scoreFn);
      EXPECT_EQ(r.bestScore, o.score) << seed << " " << to_string(variant);
      EXPECT_EQ(keys_of(r.maximizers), keys_of(o.maximizers)) << seed << " " << to_string(variant);
    }
  }
}

TEST(Mine, PruningTogglesAgree) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto in = tgtest::random_instance(seed);
    auto base = mine(in.positives, in.negatives, desk_config({false, false, false}));
    for (int mask = 1; mask < 8; ++mask) {
      auto r = mine(in.positives, in.negatives, desk_config({bool(mask & 1), bool(mask & 2), bool(mask & 4)}));
      EXPECT_EQ(r.bestScore, base.bestScore) << seed << "/" << mask;
      EXPECT_EQ(keys_of(r.maximizers), keys_of(base.maximizers)) << seed << "/" << mask;
      EXPECT_LE(r.stats.patternsVisited, base.stats.patternsVisited);
    }
  }
}

TEST(Mine, RegistryBucketsDoNotChangeDecisions) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto in = tgtest::random_instance(seed);
    auto cfg = desk_config();
    auto a = mine(in.positives, in.negatives, cfg);
    cfg.exhaustiveRegistry = true;
    auto b = mine(in.positives, in.negatives, cfg);
    EXPECT_EQ(a.stats.patternsVisited, b.stats.patternsVisited);
    EXPECT_EQ(a.stats.subgraphPruneFires, b.stats.subgraphPruneFires);
    EXPECT_EQ(a.stats.supergraphPruneFires, b.stats.supergraphPruneFires);
    EXPECT_LE(a.stats.residualTests, b.stats.residualTests);
  }
}

TEST(Mine, VisitsEachPatternOnceWithoutPruning) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto in = tgtest::random_instance(seed);
    std::map<std::string, std::pair<double, double>> seen;
    std::size_t visits = 0;
    mine(in.positives, in.negatives, desk_config({false, false, false}), nullptr,
         [&](const TemporalPattern& p, double fp, double fn) {
           ++visits;
           EXPECT_TRUE(is_pattern(p));
           seen.emplace(oracle_key(p), std::pair{fp, fn});
         });
    EXPECT_EQ(visits, seen.size());
    auto expected = oracle_enumerate_patterns(in.positives, 4);
    EXPECT_EQ(keys_of(expected), [&] {
      std::set<std::string> k;
      for (auto& [key, f] : seen) k.insert(key);
      return k;
    }());
    // Support only shrinks along growth: every prefix was seen with at least
    // the same frequencies.
    for (const auto& [key, p] : expected) {
      if (p.edge_count() < 2) continue;
      std::vector<std::uint32_t> idx(p.edge_count() - 1);
      std::iota(idx.begin(), idx.end(), 0);
      auto parent = oracle_key(pattern_from_edges(p, idx));
      ASSERT_TRUE(seen.contains(parent));
      EXPECT_LE(seen[key].first, seen[parent].first);
      EXPECT_LE(seen[key].second, seen[parent].second);
    }
  }
}

TEST(Mine, DeterministicReport) {
  auto in = tgtest::random_instance(3);
  auto cfg = desk_config();
  auto a = report_to_json(mine(in.positives, in.negatives, cfg), cfg, {}, false).dump();
  auto b = report_to_json(mine(in.positives, in.negatives, cfg), cfg, {}, false).dump();
  EXPECT_EQ(a, b);
}

TEST(Mine, QuerySizeRestrictsRankedPatterns) {
  auto in = tgtest::random_instance(5);
  auto cfg = desk_config();
  cfg.querySize = 3;
  auto r = mine(in.positives, in.negatives, cfg);
  ASSERT_FALSE(r.rankedPatterns.empty());
  for (const auto& p : r.rankedPatterns) EXPECT_EQ(p.pattern.edge_count(), 3u);
}

TEST(Mine, MinFreqFloor) {
  auto in = tgtest::random_instance(6);
  auto cfg = desk_config();
  cfg.minFreqP = 0.5;
  auto r = mine(in.positives, in.negatives, cfg);
  for (const auto& p : r.rankedPatterns) EXPECT_GE(p.freqP, 0.5);
}

TEST(Mine, TruncatedEmbeddingsKeepFrequenciesExact) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto in = tgtest::random_instance(seed);
    std::map<std::string, std::pair<double, double>> full;
    auto record = [](auto& into) {
      return [&into](const TemporalPattern& p, double fp, double fn) { into[oracle_key(p)] = {fp, fn}; };
    };
    auto cfg = desk_config({false, false, false});
    auto exact = mine(in.positives, in.negatives, cfg, nullptr, record(full));
    for (std::size_t cap : {1u, 2u}) {
      std::map<std::string, std::pair<double, double>> capped;
      cfg.embeddingCap = cap;
      cfg.pruning = {false, false, false};
      mine(in.positives, in.negatives, cfg, nullptr, record(capped));
      EXPECT_EQ(full, capped) << seed << " cap " << cap;
      cfg.pruning = {};
      auto pruned = mine(in.positives, in.negatives, cfg);
      EXPECT_EQ(pruned.bestScore, exact.bestScore);
      EXPECT_EQ(keys_of(pruned.maximizers), keys_of(exact.maximizers));
    }
  }
}

TEST(Mine, RecoversPlantedPattern) {
  auto spec = preset("small");
  spec.nPositive = spec.nNegative = 30;
  spec.seed = 9;
  auto corpus = generate_synthetic(spec);
  MiningConfig cfg;
  auto r = mine(corpus.data.positives, corpus.data.negatives, cfg);
  ASSERT_FALSE(r.rankedPatterns.empty());
  const auto& top = r.rankedPatterns.front();
  EXPECT_GE(top.freqP, 0.95);
  EXPECT_LE(top.freqN, 0.05);
  const bool related = temporal_subgraph_test(top.pattern, corpus.planted).has_value() ||
                       temporal_subgraph_test(corpus.planted, top.pattern).has_value();
  EXPECT_TRUE(related) << pattern_text(top.pattern) << " vs " << pattern_text(corpus.planted);
}
