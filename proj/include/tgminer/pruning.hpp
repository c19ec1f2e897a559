#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tgminer/growth.hpp"
#include "tgminer/scoring.hpp"
#include "tgminer/subiso.hpp"

namespace tgminer {

/// The part of a data graph later than one embedding: edges after `cutoff`.
struct ResidualView {
  std::uint32_t graph = 0;
  Timestamp cutoff = 0;  // 0 for the empty pattern
  std::size_t size = 0;
  std::vector<Label> labelSet;  // sorted by id
};

inline ResidualView residual_view(const TemporalGraph& g, std::uint32_t graphIdx, std::int64_t lastPos) {
  ResidualView r;
  r.graph = graphIdx;
  r.cutoff = lastPos < 0 ? 0 : g.edges[static_cast<std::size_t>(lastPos)].t;
  for (auto pos = static_cast<std::size_t>(lastPos + 1); pos < g.edges.size(); ++pos) {
    ++r.size;
    r.labelSet.push_back(g.labels[g.edges[pos].src]);
    r.labelSet.push_back(g.labels[g.edges[pos].dst]);
  }
  std::sort(r.labelSet.begin(), r.labelSet.end());
  r.labelSet.erase(std::unique(r.labelSet.begin(), r.labelSet.end()), r.labelSet.end());
  return r;
}

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

}  // namespace detail

/// Residual graph set of one pattern over one graph set, compressed.
/// `I` is the summed residual size. `embeddings` and `multisetHash` (an
/// order-free hash of the (graph, cutoff) multiset) make equality exact where
/// I alone is not: two residual multisets can share a sum. `minCut` keeps, per
/// supporting graph, the earliest cutoff; residuals of one graph nest, so the
/// residual label union is read off it.
struct ResidualSignature {
  std::uint64_t I = 0;
  std::uint64_t embeddings = 0;
  std::uint64_t multisetHash = 0;
  bool exact = true;
  std::vector<std::pair<std::uint32_t, std::int64_t>> minCut;

  bool same_residuals(const ResidualSignature& o) const {
    return I == o.I && embeddings == o.embeddings && multisetHash == o.multisetHash;
  }
};

inline ResidualSignature residual_signature(const EmbeddingTable& table, GraphSet graphs) {
  ResidualSignature sig;
  const std::size_t m = table.edge_count();
  for (const auto& entry : table.per_graph()) {
    const auto& g = graphs[entry.graph];
    if (entry.truncated) sig.exact = false;
    std::int64_t lowest = std::numeric_limits<std::int64_t>::max();
    for (std::size_t k = 0; k < entry.count; ++k) {
      const std::int64_t last = entry.last_edge(k, m);
      sig.I += g.edges.size() - static_cast<std::size_t>(last + 1);
      sig.multisetHash += detail::mix64((static_cast<std::uint64_t>(entry.graph) << 32) ^
                                        static_cast<std::uint64_t>(last + 1));
      lowest = std::min(lowest, last);
    }
    sig.embeddings += entry.count;
    if (entry.count > 0) sig.minCut.emplace_back(entry.graph, lowest);
  }
  return sig;
}

/// Per graph, the last edge position at which each label appears on an
/// endpoint: label l is in a residual with cutoff c iff lastSeen(l) > c.
class ResidualLabelIndex {
 public:
  ResidualLabelIndex() = default;
  explicit ResidualLabelIndex(GraphSet graphs) : last_(graphs.size()) {
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      const auto& g = graphs[gi];
      for (std::size_t pos = 0; pos < g.edges.size(); ++pos) {
        last_[gi][g.labels[g.edges[pos].src]] = static_cast<std::int64_t>(pos);
        last_[gi][g.labels[g.edges[pos].dst]] = static_cast<std::int64_t>(pos);
      }
    }
  }

  std::int64_t last_seen(std::uint32_t graph, Label l) const {
    const auto& m = last_.at(graph);
    auto it = m.find(l);
    return it == m.end() ? -1 : it->second;
  }

  /// True iff none of `labels` occurs in the residual label union of `sig`.
  bool disjoint(const ResidualSignature& sig, std::span<const Label> labels) const {
    for (const auto& [graph, cut] : sig.minCut)
      for (Label l : labels)
        if (last_seen(graph, l) > cut) return false;
    return true;
  }

 private:
  std::vector<std::unordered_map<Label, std::int64_t>> last_;
};

/// The residual node label union of a signature, sorted by id.
inline std::vector<Label> residual_labels(const ResidualSignature& sig, GraphSet graphs) {
  std::vector<Label> out;
  for (const auto& [graph, cut] : sig.minCut) {
    auto view = residual_view(graphs[graph], graph, cut);
    out.insert(out.end(), view.labelSet.begin(), view.labelSet.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// True iff the embeddings of a smaller pattern `inner` and a larger pattern
/// `outer` pair up one to one with equal cutoff and equal images of the
/// inner nodes, where `f` maps inner nodes to outer nodes. This is what the
/// growth-correspondence argument behind both pruning rules consumes.
inline bool embeddings_correspond(const EmbeddingTable& inner, const EmbeddingTable& outer,
                                  std::span<const NodeId> f) {
  using Key = std::vector<std::int64_t>;
  auto keys = [](const EmbeddingTable& t, auto&& image) {
    std::vector<Key> out;
    for (const auto& entry : t.per_graph())
      for (std::size_t k = 0; k < entry.count; ++k) {
        Key key{entry.graph, entry.last_edge(k, t.edge_count())};
        image(entry.node_map(k, t.node_count()), key);
        out.push_back(std::move(key));
      }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto a = keys(inner, [](std::span<const NodeId> nm, Key& key) { key.insert(key.end(), nm.begin(), nm.end()); });
  auto b = keys(outer, [&](std::span<const NodeId> nm, Key& key) {
    for (NodeId v : f) key.push_back(nm[v]);
  });
  return a == b;
}

struct RegistryEntry {
  TemporalPattern pattern;
  ResidualSignature pos;
  std::optional<ResidualSignature> neg;
  // Upper bounds on scores in this pattern's branch: `within` over patterns
  // up to the size limit, `beyond` over the unbounded branch.
  double within = -std::numeric_limits<double>::infinity();
  double beyond = -std::numeric_limits<double>::infinity();
  bool finalized = false;
};

/// Explored patterns, bucketed by positive residual sum. Entries are inserted
/// provisionally when visited and only take part in decisions once their DFS
/// subtree is finalized.
class PatternRegistry {
 public:
  explicit PatternRegistry(std::size_t maxEntries = std::size_t{1} << 20, bool exhaustive = false)
      : maxEntries_(maxEntries), exhaustive_(exhaustive) {}

  /// Returns the entry id, or nullopt when full or the signature is inexact.
  std::optional<std::size_t> insert(TemporalPattern p, ResidualSignature pos,
                                    std::optional<ResidualSignature> neg = std::nullopt) {
    if (!pos.exact || entries_.size() >= maxEntries_) return std::nullopt;
    const std::size_t id = entries_.size();
    buckets_[pos.I].push_back(id);
    entries_.push_back({std::move(p), std::move(pos), std::move(neg)});
    return id;
  }

  void finalize(std::size_t id, double within, double beyond) {
    auto& e = entries_.at(id);
    e.within = within;
    e.beyond = beyond;
    e.finalized = true;
  }

  const RegistryEntry& entry(std::size_t id) const { return entries_.at(id); }
  RegistryEntry& entry(std::size_t id) { return entries_.at(id); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool exhaustive() const noexcept { return exhaustive_; }

  /// Ids that may share the positive residual set with a pattern whose
  /// positive residual sum is I. Exhaustive mode returns every id.
  std::vector<std::size_t> candidates(std::uint64_t I) const {
    if (exhaustive_) {
      std::vector<std::size_t> all(entries_.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      return all;
    }
    auto it = buckets_.find(I);
    return it == buckets_.end() ? std::vector<std::size_t>{} : it->second;
  }

 private:
  std::size_t maxEntries_;
  bool exhaustive_;
  std::vector<RegistryEntry> entries_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

struct PruneCounters {
  std::uint64_t subisoTests = 0;
  std::uint64_t residualTests = 0;
};

/// Everything a pruning decision reads besides the registry.
struct PruneContext {
  GraphSet positives;
  GraphSet negatives;
  const ResidualLabelIndex* positiveLabels = nullptr;
  double threshold = -std::numeric_limits<double>::infinity();  // F*
  std::size_t embeddingCap = kDefaultEmbeddingCap;
  SubisoOptions subiso;
  PruneCounters* counters = nullptr;
};

struct PruneDecision {
  std::size_t by = 0;  // registry id of g1
  double within = 0.0;
  double beyond = 0.0;
};

namespace detail {

// Up to two distinct node maps of `small` into `large`; the rules need the
// map to be unique.
inline std::optional<std::vector<NodeId>> unique_node_map(const TemporalPattern& small, const TemporalPattern& large,
                                                          const PruneContext& ctx) {
  if (ctx.counters) ++ctx.counters->subisoTests;
  SubisoTarget target(large);
  std::vector<NodeId> first;
  std::size_t n = enumerate_node_mappings(
      small, target, 2,
      [&](const Embedding& m) {
        if (first.empty()) first = m.nodeMap;
        return true;
      },
      ctx.subiso);
  if (n != 1) return std::nullopt;
  return first;
}

inline bool verify_tables(const EmbeddingTable& innerTable, const EmbeddingTable& outerTable,
                          std::span<const NodeId> f) {
  if (innerTable.truncated() || outerTable.truncated()) return false;
  return embeddings_correspond(innerTable, outerTable, f);
}

}  // namespace detail

/// Subgraph rule: some finalized g1 with g2 ⊆_t g1 (unique node map f),
/// identical positive residual sets, no g1 node outside f(V2) carrying a label
/// of g2's positive residuals, and a branch bound below F*.
inline std::optional<PruneDecision> subgraph_prune_check(const TemporalPattern& g2, const EmbeddingTable& table2,
                                                         const ResidualSignature& sig2, PatternRegistry& registry,
                                                         const PruneContext& ctx) {
  if (!sig2.exact || table2.truncated()) return std::nullopt;
  for (std::size_t id : registry.candidates(sig2.I)) {
    const RegistryEntry& e = registry.entry(id);
    if (!e.finalized || e.beyond >= ctx.threshold) continue;
    if (e.pattern.edge_count() <= g2.edge_count() || e.pattern.node_count() < g2.node_count()) continue;
    if (ctx.counters) ++ctx.counters->residualTests;
    if (!e.pos.same_residuals(sig2)) continue;
    auto f = detail::unique_node_map(g2, e.pattern, ctx);
    if (!f) continue;
    std::vector<char> covered(e.pattern.node_count(), 0);
    for (NodeId v : *f) covered[v] = 1;
    std::vector<Label> extra;
    for (NodeId v = 0; v < e.pattern.node_count(); ++v)
      if (!covered[v]) extra.push_back(e.pattern.labels[v]);
    if (ctx.positiveLabels && !ctx.positiveLabels->disjoint(sig2, extra)) continue;
    auto t1 = build_table(e.pattern, ctx.positives, ctx.embeddingCap);
    if (!detail::verify_tables(table2, t1, *f)) continue;
    return PruneDecision{id, e.beyond, e.beyond};
  }
  return std::nullopt;
}

/// Supergraph rule: some finalized g1 with g1 ⊆_t g2, equal node counts,
/// identical positive and negative residual sets and a branch bound below F*.
inline std::optional<PruneDecision> supergraph_prune_check(const TemporalPattern& g2, const EmbeddingTable& pos2,
                                                           const ResidualSignature& sig2p,
                                                           const EmbeddingTable& neg2,
                                                           const ResidualSignature& sig2n,
                                                           PatternRegistry& registry, const PruneContext& ctx) {
  if (!sig2p.exact || !sig2n.exact) return std::nullopt;
  for (std::size_t id : registry.candidates(sig2p.I)) {
    RegistryEntry& e = registry.entry(id);
    if (!e.finalized || e.within >= ctx.threshold) continue;
    if (e.pattern.node_count() != g2.node_count() || e.pattern.edge_count() >= g2.edge_count()) continue;
    if (ctx.counters) ++ctx.counters->residualTests;
    if (!e.pos.same_residuals(sig2p)) continue;
    if (!e.neg) {
      auto t = build_table(e.pattern, ctx.negatives, ctx.embeddingCap);
      e.neg = residual_signature(t, ctx.negatives);
    }
    if (ctx.counters) ++ctx.counters->residualTests;
    if (!e.neg->exact || !e.neg->same_residuals(sig2n)) continue;
    auto f = detail::unique_node_map(e.pattern, g2, ctx);
    if (!f) continue;
    auto t1p = build_table(e.pattern, ctx.positives, ctx.embeddingCap);
    if (!detail::verify_tables(t1p, pos2, *f)) continue;
    auto t1n = build_table(e.pattern, ctx.negatives, ctx.embeddingCap);
    if (!detail::verify_tables(t1n, neg2, *f)) continue;
    return PruneDecision{id, e.within, e.beyond};
  }
  return std::nullopt;
}

}  // namespace tgminer
