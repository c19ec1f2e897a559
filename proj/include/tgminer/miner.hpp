#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <unordered_set>
#include <vector>

#include "tgminer/growth.hpp"
#include "tgminer/pruning.hpp"
#include "tgminer/scoring.hpp"
#include "tgminer/subiso.hpp"

namespace tgminer {

struct PruningToggles {
  bool naiveBound = true;
  bool subgraph = true;
  bool supergraph = true;
};

struct MiningConfig {
  std::size_t maxEdges = 6;
  std::size_t topK = 5;
  ScoreFunction scoreFn = ScoreFunction::log_ratio();
  PruningToggles pruning;
  std::size_t embeddingCap = kDefaultEmbeddingCap;
  double minFreqP = 0.0;
  std::uint64_t seed = 0;  // the search is deterministic; kept for reports
  // When set, only patterns with exactly this many edges are ranked. The
  // search and its pruning are unchanged.
  std::optional<std::size_t> querySize;
  SubisoOptions subiso;
  std::size_t registryMaxEntries = std::size_t{1} << 20;
  bool exhaustiveRegistry = false;
};

struct MiningStats {
  std::uint64_t patternsVisited = 0;
  std::uint64_t subgraphPruneFires = 0;
  std::uint64_t supergraphPruneFires = 0;
  std::uint64_t boundPruneFires = 0;
  std::uint64_t subisoTests = 0;
  std::uint64_t residualTests = 0;
  std::uint64_t truncatedTables = 0;
  std::uint64_t registryEntries = 0;
  double wallTime = 0.0;  // seconds
};

struct MiningResult {
  std::vector<ScoredPattern> rankedPatterns;
  // Every visited pattern reaching the best score, in rank order.
  std::vector<ScoredPattern> maximizers;
  double bestScore = -std::numeric_limits<double>::infinity();
  MiningStats stats;
};

/// Called once per visited pattern with its exact frequencies.
using VisitHook = std::function<void(const TemporalPattern&, double freqP, double freqN)>;

inline double frequency(const EmbeddingTable& table, std::size_t setSize) {
  if (setSize == 0) throw Error(ErrorCode::ConfigInvalid, "frequency over an empty set");
  return static_cast<double>(table.supporting_graphs()) / static_cast<double>(setSize);
}

namespace detail {

// Graphs whose parent entry was truncated may hold the child even though no
// stored parent embedding extends to it; settle those by a subgraph test so
// that frequencies stay exact. Such entries carry no embeddings.
inline void repair_truncated(EmbeddingTable& child, const EmbeddingTable& parent, const TemporalPattern& pattern,
                             GraphSet graphs, const SubisoOptions& opts) {
  auto& list = child.per_graph();
  for (const auto& pe : parent.per_graph()) {
    if (!pe.truncated) continue;
    auto it = std::lower_bound(list.begin(), list.end(), pe.graph,
                               [](const GraphEmbeddings& ge, std::uint32_t g) { return ge.graph < g; });
    if (it != list.end() && it->graph == pe.graph) continue;
    if (temporal_subgraph_test(pattern, graphs[pe.graph], opts)) list.insert(it, {pe.graph, 0, {}, {}, true});
  }
}

// Extensions that unstored embeddings in truncated graphs might realise:
// every shape whose labels fit some data edge of such a graph. A superset;
// callers confirm each one by a subgraph test.
inline std::vector<Extension> possible_extensions(const TemporalPattern& p, const EmbeddingTable& table,
                                                  GraphSet graphs) {
  std::unordered_set<Extension, ExtensionHash> out;
  for (const auto& entry : table.per_graph()) {
    if (!entry.truncated) continue;
    for (const auto& e : graphs[entry.graph].edges) {
      const Label ls = graphs[entry.graph].labels[e.src], ld = graphs[entry.graph].labels[e.dst];
      for (NodeId u = 0; u < p.node_count(); ++u) {
        if (e.src == e.dst) {
          if (p.labels[u] == ls) out.insert({GrowthKind::Inward, u, u, ls, ld});
          continue;
        }
        if (p.labels[u] == ls) {
          out.insert({GrowthKind::Forward, u, kNoNode, ls, ld});
          for (NodeId v = 0; v < p.node_count(); ++v)
            if (v != u && p.labels[v] == ld) out.insert({GrowthKind::Inward, u, v, ls, ld});
        }
        if (p.labels[u] == ld) out.insert({GrowthKind::Backward, kNoNode, u, ls, ld});
      }
    }
  }
  return {out.begin(), out.end()};
}

class Miner {
 public:
  Miner(GraphSet pos, GraphSet neg, const MiningConfig& cfg, const VisitHook* hook)
      : pos_(pos), neg_(neg), cfg_(cfg), hook_(hook), labels_(pos),
        registry_(cfg.registryMaxEntries, cfg.exhaustiveRegistry) {
    cfg_.scoreFn.positives = static_cast<double>(pos.size());
    cfg_.scoreFn.negatives = static_cast<double>(neg.size());
  }

  MiningResult run() {
    auto start = std::chrono::steady_clock::now();
    TemporalPattern empty;
    auto posRoot = EmbeddingTable::root(pos_);
    auto negRoot = EmbeddingTable::root(neg_);
    expand_children(empty, posRoot, negRoot);

    MiningResult result;
    auto model = InterestModel::from_graphs(pos_);
    for (const auto& g : neg_)
      for (Label l : std::unordered_set<Label>(g.labels.begin(), g.labels.end()))
        model.set_frequency(l, model.frequency(l) + 1);
    if (interest_) model = *interest_;
    std::vector<ScoredPattern> kept;
    for (auto& c : candidates_)
      if (c.score >= threshold()) kept.push_back(std::move(c));
    auto all = rank(kept, model, kept.size());
    if (!all.empty()) result.bestScore = all.front().score;
    for (const auto& c : all)
      if (c.score == result.bestScore) result.maximizers.push_back(c);
    result.rankedPatterns.assign(all.begin(), all.begin() + std::min(all.size(), cfg_.topK));
    stats_.subisoTests += counters_.subisoTests;
    stats_.residualTests = counters_.residualTests;
    stats_.registryEntries = registry_.size();
    stats_.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.stats = stats_;
    return result;
  }

  void set_interest_model(const InterestModel& m) { interest_ = m; }

 private:
  struct Bounds {
    double within;
    double beyond;
  };

  double threshold() const {
    return best_.size() < cfg_.topK ? -std::numeric_limits<double>::infinity() : best_.top();
  }

  void offer(const TemporalPattern& p, double s, double fp, double fn) {
    if (cfg_.querySize && p.edge_count() != *cfg_.querySize) return;
    if (fp < cfg_.minFreqP) return;
    if (best_.size() < cfg_.topK) {
      best_.push(s);
    } else if (s > best_.top()) {
      best_.pop();
      best_.push(s);
    }
    if (s < threshold()) return;
    candidates_.push_back({p, s, fp, fn, 0.0, {}});
    if (candidates_.size() > 4 * cfg_.topK + 1024) {
      const double t = threshold();
      std::erase_if(candidates_, [t](const ScoredPattern& c) { return c.score < t; });
    }
  }

  PruneContext context() {
    PruneContext ctx;
    ctx.positives = pos_;
    ctx.negatives = neg_;
    ctx.positiveLabels = &labels_;
    ctx.threshold = threshold();
    ctx.embeddingCap = cfg_.embeddingCap;
    ctx.subiso = cfg_.subiso;
    ctx.counters = &counters_;
    return ctx;
  }

  Bounds visit(const TemporalPattern& p, const EmbeddingTable& posT, const EmbeddingTable& negT) {
    ++stats_.patternsVisited;
    if (posT.truncated() || negT.truncated()) ++stats_.truncatedTables;
    const double fp = frequency(posT, pos_.size());
    const double fn = frequency(negT, neg_.size());
    const double s = score(cfg_.scoreFn, fp, fn);
    if (hook_ && *hook_) (*hook_)(p, fp, fn);
    offer(p, s, fp, fn);
    const double ub = score_upper_bound(cfg_.scoreFn, fp);
    if (p.edge_count() >= cfg_.maxEdges) return {s, std::max(s, ub)};
    if (fp < cfg_.minFreqP) return {ub, ub};
    if (cfg_.pruning.naiveBound && ub < threshold()) {
      ++stats_.boundPruneFires;
      return {ub, ub};
    }

    ResidualSignature sigP = residual_signature(posT, pos_);
    std::optional<ResidualSignature> sigN;
    if (cfg_.pruning.subgraph) {
      if (auto d = subgraph_prune_check(p, posT, sigP, registry_, context())) {
        ++stats_.subgraphPruneFires;
        return {std::max(s, d->within), std::max(s, d->beyond)};
      }
    }
    if (cfg_.pruning.supergraph) {
      sigN = residual_signature(negT, neg_);
      if (auto d = supergraph_prune_check(p, posT, sigP, negT, *sigN, registry_, context())) {
        ++stats_.supergraphPruneFires;
        return {std::max(s, d->within), std::max(s, d->beyond)};
      }
    }
    std::optional<std::size_t> id;
    if (cfg_.pruning.subgraph || cfg_.pruning.supergraph) id = registry_.insert(p, std::move(sigP), std::move(sigN));

    Bounds b = expand_children(p, posT, negT, s, ub);
    if (id) registry_.finalize(*id, b.within, b.beyond);
    return b;
  }

  Bounds expand_children(const TemporalPattern& p, const EmbeddingTable& posT, const EmbeddingTable& negT,
                         double s = -std::numeric_limits<double>::infinity(),
                         double ub = std::numeric_limits<double>::infinity()) {
    Bounds b{s, s};
    auto children = expand(posT, pos_, cfg_.embeddingCap);
    if (posT.truncated()) {
      // Children realised only by unstored embeddings are found by test.
      std::unordered_set<Extension, ExtensionHash> have;
      for (auto& c : children) {
        have.insert(c.ext);
        repair_truncated(c.table, posT, grow(p, c.ext), pos_, cfg_.subiso);
      }
      for (const auto& x : possible_extensions(p, posT, pos_)) {
        if (have.contains(x)) continue;
        const TemporalPattern cp = grow(p, x);
        Child c{x, EmbeddingTable(cp.node_count(), cp.edge_count())};
        repair_truncated(c.table, posT, cp, pos_, cfg_.subiso);
        if (c.table.supporting_graphs() > 0) children.push_back(std::move(c));
      }
    }
    std::sort(children.begin(), children.end(),
              [](const Child& a, const Child& c) { return extension_less(a.ext, c.ext); });
    std::vector<Extension> allowed;
    allowed.reserve(children.size());
    for (const auto& c : children) allowed.push_back(c.ext);
    auto negChildren = expand(negT, neg_, cfg_.embeddingCap, &allowed);
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (!p.edges.empty() && cfg_.pruning.naiveBound && ub < threshold()) {
        // F* rose past this pattern's bound while its children were searched.
        ++stats_.boundPruneFires;
        b.within = std::max(b.within, ub);
        b.beyond = std::max(b.beyond, ub);
        break;
      }
      TemporalPattern cp = grow(p, children[i].ext);
      EmbeddingTable& cpos = children[i].table;
      EmbeddingTable& cneg = negChildren[i].table;
      if (negT.truncated()) repair_truncated(cneg, negT, cp, neg_, cfg_.subiso);
      Bounds cb = visit(cp, cpos, cneg);
      b.within = std::max(b.within, cb.within);
      b.beyond = std::max(b.beyond, cb.beyond);
      // Release the child's tables before moving on.
      cpos = EmbeddingTable();
      cneg = EmbeddingTable();
    }
    return b;
  }

  GraphSet pos_;
  GraphSet neg_;
  MiningConfig cfg_;
  const VisitHook* hook_;
  ResidualLabelIndex labels_;
  PatternRegistry registry_;
  PruneCounters counters_;
  MiningStats stats_;
  std::priority_queue<double, std::vector<double>, std::greater<>> best_;
  std::vector<ScoredPattern> candidates_;
  std::optional<InterestModel> interest_;
};

}  // namespace detail

/// Mines the most discriminative T-connected patterns of at most
/// cfg.maxEdges edges. Every pattern with score equal to the best found is
/// in `maximizers`; `rankedPatterns` holds the top-k by rank order.
inline MiningResult mine(GraphSet positives, GraphSet negatives, const MiningConfig& cfg,
                         const InterestModel* interestModel = nullptr, const VisitHook& hook = {}) {
  if (positives.empty()) throw Error(ErrorCode::EmptyDataset, "no positive graphs");
  if (negatives.empty()) throw Error(ErrorCode::EmptyDataset, "no negative graphs");
  if (cfg.maxEdges < 1) throw Error(ErrorCode::ConfigInvalid, "maxEdges must be at least 1");
  if (cfg.topK < 1) throw Error(ErrorCode::ConfigInvalid, "topK must be at least 1");
  if (cfg.embeddingCap < 1) throw Error(ErrorCode::ConfigInvalid, "embedding cap must be at least 1");
  if (cfg.minFreqP < 0.0 || cfg.minFreqP > 1.0) throw Error(ErrorCode::ConfigInvalid, "minFreqP outside [0,1]");
  if (cfg.querySize && (*cfg.querySize < 1 || *cfg.querySize > cfg.maxEdges))
    throw Error(ErrorCode::ConfigInvalid, "querySize outside [1, maxEdges]");
  detail::Miner miner(positives, negatives, cfg, hook ? &hook : nullptr);
  if (interestModel) miner.set_interest_model(*interestModel);
  return miner.run();
}

}  // namespace tgminer
