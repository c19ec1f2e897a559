#pragma once

// Consecutive pattern growth. A pattern grows by one edge carrying pattern
// timestamp |E|+1 whose endpoints are (existing, new), (new, existing) or
// (existing, existing): forward, backward and inward growth. Each T-connected
// pattern is reachable from the empty pattern along exactly one such path, so
// the DFS never needs canonical labelling to avoid revisiting a pattern.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "tgminer/graph.hpp"

namespace tgminer {

using GraphSet = std::span<const TemporalGraph>;

enum class GrowthKind : std::uint8_t { Seed, Forward, Backward, Inward };

inline const char* to_string(GrowthKind k) {
  switch (k) {
    case GrowthKind::Seed: return "seed";
    case GrowthKind::Forward: return "forward";
    case GrowthKind::Backward: return "backward";
    case GrowthKind::Inward: return "inward";
  }
  return "?";
}

/// One abstract growth step. `src`/`dst` name existing pattern nodes
/// (kNoNode for a new node); the labels are always filled in, for new and
/// existing endpoints alike. A seed is the single-edge growth of the empty
/// pattern, where both endpoints are new.
struct Extension {
  GrowthKind kind = GrowthKind::Seed;
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  Label srcLabel;
  Label dstLabel;

  friend bool operator==(const Extension& a, const Extension& b) {
    return a.kind == b.kind && a.src == b.src && a.dst == b.dst && a.srcLabel == b.srcLabel &&
           a.dstLabel == b.dstLabel;
  }
};

/// Deterministic child order: kind, then label text, then node refs.
inline bool extension_less(const Extension& a, const Extension& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (int c = text_compare(a.srcLabel, b.srcLabel)) return c < 0;
  if (int c = text_compare(a.dstLabel, b.dstLabel)) return c < 0;
  return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
}

struct ExtensionHash {
  std::size_t operator()(const Extension& x) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(x.kind);
    auto mix = [&h](std::uint64_t v) { h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2); };
    mix(x.src);
    mix(x.dst);
    mix(x.srcLabel.id());
    mix(x.dstLabel.id());
    return static_cast<std::size_t>(h);
  }
};

inline TemporalPattern grow(const TemporalPattern& p, const Extension& x) {
  const auto n = static_cast<NodeId>(p.node_count());
  auto fail = [&](const std::string& why) { throw Error(ErrorCode::InvalidExtension, why); };
  TemporalPattern out = p;
  NodeId s = x.src;
  NodeId d = x.dst;
  switch (x.kind) {
    case GrowthKind::Seed:
      if (!p.edges.empty()) fail("seed applied to a non-empty pattern");
      if (!x.srcLabel.valid() || !x.dstLabel.valid()) fail("seed without labels");
      out.labels = {x.srcLabel, x.dstLabel};
      s = 0;
      d = 1;
      break;
    case GrowthKind::Forward:
      if (s >= n || d != kNoNode || !x.dstLabel.valid()) fail("forward needs an existing source and a new target");
      d = n;
      out.labels.push_back(x.dstLabel);
      break;
    case GrowthKind::Backward:
      if (d >= n || s != kNoNode || !x.srcLabel.valid()) fail("backward needs a new source and an existing target");
      s = n;
      out.labels.push_back(x.srcLabel);
      break;
    case GrowthKind::Inward:
      if (s >= n || d >= n) fail("inward needs two existing endpoints");
      break;
  }
  out.edges.push_back({s, d, static_cast<Timestamp>(p.edges.size() + 1)});
  return out;
}

/// The growth step that turns the first `j` edges of `p` into the first j+1.
inline Extension extension_for_edge(const TemporalPattern& p, std::size_t j) {
  const auto& e = p.edges.at(j);
  Extension x;
  x.srcLabel = p.labels[e.src];
  x.dstLabel = p.labels[e.dst];
  if (j == 0) {
    x.kind = GrowthKind::Seed;
    return x;
  }
  std::vector<char> seen(p.node_count(), 0);
  for (std::size_t i = 0; i < j; ++i) seen[p.edges[i].src] = seen[p.edges[i].dst] = 1;
  bool hasSrc = seen[e.src], hasDst = seen[e.dst];
  if (hasSrc && hasDst) {
    x.kind = GrowthKind::Inward;
    x.src = e.src;
    x.dst = e.dst;
  } else if (hasSrc) {
    x.kind = GrowthKind::Forward;
    x.src = e.src;
  } else if (hasDst) {
    x.kind = GrowthKind::Backward;
    x.dst = e.dst;
  } else {
    throw Error(ErrorCode::NotTConnected, "edge " + std::to_string(j) + " touches no earlier node");
  }
  return x;
}

/// Embeddings of one pattern inside one data graph, stored flat: embedding k
/// owns nodes[k*n .. k*n+n) and edge positions edges[k*m .. k*m+m).
struct GraphEmbeddings {
  std::uint32_t graph = 0;
  std::size_t count = 0;
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> edges;
  bool truncated = false;

  std::span<const NodeId> node_map(std::size_t k, std::size_t n) const { return {nodes.data() + k * n, n}; }
  std::span<const std::uint32_t> edge_positions(std::size_t k, std::size_t m) const {
    return {edges.data() + k * m, m};
  }
  // Position of the last matched edge, -1 for the empty pattern.
  std::int64_t last_edge(std::size_t k, std::size_t m) const {
    return m == 0 ? -1 : static_cast<std::int64_t>(edges[k * m + m - 1]);
  }
};

/// All embeddings of a pattern over a graph set. Graphs without an embedding
/// have no entry. A truncated entry holds only the first `cap` embeddings.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t nodeCount, std::size_t edgeCount) : nodeCount_(nodeCount), edgeCount_(edgeCount) {}

  /// Table of the empty pattern: one empty embedding per graph.
  static EmbeddingTable root(GraphSet graphs) {
    EmbeddingTable t(0, 0);
    for (std::uint32_t i = 0; i < graphs.size(); ++i) t.perGraph_.push_back({i, 1, {}, {}, false});
    return t;
  }

  std::size_t node_count() const noexcept { return nodeCount_; }
  std::size_t edge_count() const noexcept { return edgeCount_; }
  const std::vector<GraphEmbeddings>& per_graph() const noexcept { return perGraph_; }
  std::vector<GraphEmbeddings>& per_graph() noexcept { return perGraph_; }

  std::size_t supporting_graphs() const noexcept { return perGraph_.size(); }
  bool truncated() const noexcept {
    return std::any_of(perGraph_.begin(), perGraph_.end(), [](const auto& g) { return g.truncated; });
  }
  std::size_t total_embeddings() const noexcept {
    std::size_t s = 0;
    for (const auto& g : perGraph_) s += g.count;
    return s;
  }

  Embedding embedding(const GraphEmbeddings& entry, std::size_t k, const TemporalGraph& g) const {
    Embedding m;
    auto nodes = entry.node_map(k, nodeCount_);
    m.nodeMap.assign(nodes.begin(), nodes.end());
    for (auto pos : entry.edge_positions(k, edgeCount_)) m.timeMap.push_back(g.edges[pos].t);
    return m;
  }

  std::vector<Embedding> embeddings_of(std::uint32_t graph, const TemporalGraph& g) const {
    std::vector<Embedding> out;
    for (const auto& entry : perGraph_)
      if (entry.graph == graph)
        for (std::size_t k = 0; k < entry.count; ++k) out.push_back(embedding(entry, k, g));
    return out;
  }

 private:
  std::size_t nodeCount_ = 0;
  std::size_t edgeCount_ = 0;
  std::vector<GraphEmbeddings> perGraph_;
};

inline constexpr std::size_t kDefaultEmbeddingCap = 10000;

struct Child {
  Extension ext;
  EmbeddingTable table;
};

namespace detail {

inline NodeId find_pattern_node(std::span<const NodeId> nodeMap, NodeId dataNode) {
  for (std::size_t i = 0; i < nodeMap.size(); ++i)
    if (nodeMap[i] == dataNode) return static_cast<NodeId>(i);
  return kNoNode;
}

// Abstract extension realised by data edge `e` from an embedding with the
// given node map. nullopt when the edge touches no mapped node of a
// non-empty pattern, or is a self-loop needing a new node.
inline std::optional<Extension> classify(std::span<const NodeId> nodeMap, const TemporalGraph& g,
                                         const TemporalEdge& e) {
  Extension x;
  x.srcLabel = g.labels[e.src];
  x.dstLabel = g.labels[e.dst];
  if (nodeMap.empty()) {
    if (e.src == e.dst) return std::nullopt;
    x.kind = GrowthKind::Seed;
    return x;
  }
  NodeId ps = find_pattern_node(nodeMap, e.src);
  NodeId pd = find_pattern_node(nodeMap, e.dst);
  if (ps != kNoNode && pd != kNoNode) {
    x.kind = GrowthKind::Inward;
    x.src = ps;
    x.dst = pd;
  } else if (ps != kNoNode) {
    if (e.src == e.dst) return std::nullopt;
    x.kind = GrowthKind::Forward;
    x.src = ps;
  } else if (pd != kNoNode) {
    x.kind = GrowthKind::Backward;
    x.dst = pd;
  } else {
    return std::nullopt;
  }
  return x;
}

}  // namespace detail

/// Builds every child table of `table` in one pass over residual edges: each
/// embedding is extended by every later data edge touching it. When
/// `allowed` is given only those extensions are materialised, in that order.
inline std::vector<Child> expand(const EmbeddingTable& table, GraphSet graphs, std::size_t cap,
                                 const std::vector<Extension>* allowed = nullptr) {
  std::vector<Child> children;
  std::unordered_map<Extension, std::size_t, ExtensionHash> index;
  const std::size_t n = table.node_count();
  const std::size_t m = table.edge_count();
  if (allowed) {
    for (const auto& x : *allowed) {
      index.emplace(x, children.size());
      children.push_back({x, EmbeddingTable(n + (x.kind == GrowthKind::Seed ? 2 : x.kind == GrowthKind::Inward ? 0 : 1),
                                            m + 1)});
    }
  }
  std::vector<std::int64_t> lastTouched(children.size(), -1);
  for (const auto& entry : table.per_graph()) {
    const TemporalGraph& g = graphs[entry.graph];
    for (std::size_t k = 0; k < entry.count; ++k) {
      auto nodeMap = entry.node_map(k, n);
      auto positions = entry.edge_positions(k, m);
      const std::int64_t last = entry.last_edge(k, m);
      for (auto pos = static_cast<std::size_t>(last + 1); pos < g.edges.size(); ++pos) {
        const auto& e = g.edges[pos];
        auto x = detail::classify(nodeMap, g, e);
        if (!x) continue;
        auto it = index.find(*x);
        if (it == index.end()) {
          if (allowed) continue;
          const std::size_t added = x->kind == GrowthKind::Seed ? 2 : x->kind == GrowthKind::Inward ? 0 : 1;
          it = index.emplace(*x, children.size()).first;
          children.push_back({*x, EmbeddingTable(n + added, m + 1)});
          lastTouched.push_back(-1);
        }
        Child& child = children[it->second];
        auto& list = child.table.per_graph();
        if (lastTouched[it->second] != static_cast<std::int64_t>(entry.graph)) {
          list.push_back({entry.graph, 0, {}, {}, entry.truncated});
          lastTouched[it->second] = entry.graph;
        }
        GraphEmbeddings& dst = list.back();
        if (dst.count >= cap) {
          dst.truncated = true;
          continue;
        }
        dst.nodes.insert(dst.nodes.end(), nodeMap.begin(), nodeMap.end());
        switch (x->kind) {
          case GrowthKind::Seed:
            dst.nodes.push_back(e.src);
            dst.nodes.push_back(e.dst);
            break;
          case GrowthKind::Forward: dst.nodes.push_back(e.dst); break;
          case GrowthKind::Backward: dst.nodes.push_back(e.src); break;
          case GrowthKind::Inward: break;
        }
        dst.edges.insert(dst.edges.end(), positions.begin(), positions.end());
        dst.edges.push_back(static_cast<std::uint32_t>(pos));
        ++dst.count;
      }
    }
  }
  if (allowed) {
    for (auto& c : children) {
      auto& list = c.table.per_graph();
      list.erase(std::remove_if(list.begin(), list.end(), [](const auto& ge) { return ge.count == 0 && !ge.truncated; }),
                 list.end());
    }
  }
  return children;
}

/// Distinct extensions realised by later data edges of the embeddings,
/// sorted by `extension_less`.
inline std::vector<Extension> enumerate_extensions(const EmbeddingTable& table, GraphSet graphs) {
  std::vector<Extension> out;
  for (auto& c : expand(table, graphs, kDefaultEmbeddingCap)) out.push_back(c.ext);
  std::sort(out.begin(), out.end(), extension_less);
  return out;
}

inline std::vector<Extension> enumerate_extensions(const TemporalPattern& p, const EmbeddingTable& table,
                                                   GraphSet graphs) {
  if (table.edge_count() != p.edge_count()) throw Error(ErrorCode::InvalidExtension, "table does not match pattern");
  return enumerate_extensions(table, graphs);
}

/// Embedding table of grow(p, x): each embedding spawns one child per later
/// data edge realising x.
inline EmbeddingTable extend_embeddings(const EmbeddingTable& table, const Extension& x, GraphSet graphs,
                                        std::size_t cap = kDefaultEmbeddingCap) {
  std::vector<Extension> only{x};
  auto children = expand(table, graphs, cap, &only);
  return std::move(children.front().table);
}

/// Embeddings of a whole pattern, grown edge by edge from the empty pattern.
inline EmbeddingTable build_table(const TemporalPattern& p, GraphSet graphs, std::size_t cap = kDefaultEmbeddingCap) {
  EmbeddingTable t = EmbeddingTable::root(graphs);
  for (std::size_t j = 0; j < p.edge_count(); ++j) t = extend_embeddings(t, extension_for_edge(p, j), graphs, cap);
  return t;
}

}  // namespace tgminer
