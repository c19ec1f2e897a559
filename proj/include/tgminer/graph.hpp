#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tgminer/error.hpp"
#include "tgminer/label.hpp"

namespace tgminer {

using NodeId = std::uint32_t;
using Timestamp = std::uint64_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct TemporalEdge {
  NodeId src = 0;
  NodeId dst = 0;
  Timestamp t = 0;

  friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

/// Labeled directed multigraph with totally ordered edges. Node ids are dense
/// per graph; `edges` is sorted by strictly increasing timestamp.
struct TemporalGraph {
  std::string id;
  std::vector<Label> labels;
  std::vector<TemporalEdge> edges;

  std::size_t node_count() const noexcept { return labels.size(); }
  std::size_t edge_count() const noexcept { return edges.size(); }
  bool empty() const noexcept { return edges.empty(); }
  Label label(NodeId v) const { return labels.at(v); }

  friend bool operator==(const TemporalGraph&, const TemporalGraph&) = default;
};

/// A temporal graph whose timestamps are exactly 1..|E| and which is
/// T-connected. Kept as an alias: every algorithm accepts both.
using TemporalPattern = TemporalGraph;

/// One match (f, tau) of a pattern inside a data graph. `timeMap[i]` is the
/// data timestamp of pattern edge i (pattern timestamp i + 1).
struct Embedding {
  std::vector<NodeId> nodeMap;
  std::vector<Timestamp> timeMap;

  Timestamp maxDataTime() const { return timeMap.empty() ? 0 : timeMap.back(); }
  Timestamp minDataTime() const { return timeMap.empty() ? 0 : timeMap.front(); }

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

struct RawGraph {
  std::string id;
  std::vector<std::string> labels;
  std::vector<TemporalEdge> edges;
};

struct ValidateOptions {
  bool allowSelfLoops = false;
};

/// Builds a TemporalGraph from raw lists, sorting edges by timestamp.
inline TemporalGraph validate(const RawGraph& raw, ValidateOptions opts = {}) {
  TemporalGraph g;
  g.id = raw.id;
  g.labels.reserve(raw.labels.size());
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    if (raw.labels[i].empty())
      throw Error(ErrorCode::EmptyLabel, "node " + std::to_string(i) + " of graph '" + raw.id + "'");
    g.labels.push_back(Label::intern(raw.labels[i]));
  }
  g.edges = raw.edges;
  for (const auto& e : g.edges) {
    if (e.src >= g.labels.size() || e.dst >= g.labels.size())
      throw Error(ErrorCode::DanglingEndpoint, "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                                                   "," + std::to_string(e.t) + ") in graph '" + raw.id + "'");
    if (e.src == e.dst && !opts.allowSelfLoops)
      throw Error(ErrorCode::SelfLoop, "node " + std::to_string(e.src) + " at t=" + std::to_string(e.t) +
                                           " in graph '" + raw.id + "'");
  }
  std::stable_sort(g.edges.begin(), g.edges.end(),
                   [](const TemporalEdge& a, const TemporalEdge& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < g.edges.size(); ++i) {
    if (g.edges[i].t == g.edges[i - 1].t)
      throw Error(ErrorCode::DuplicateTimestamp, "t=" + std::to_string(g.edges[i].t) + " in graph '" + raw.id + "'");
  }
  return g;
}

/// True iff every timestamp prefix of the edge set (including the edge at
/// that timestamp) forms a connected undirected graph. Given a connected
/// prefix, appending an edge keeps it connected iff the edge touches a node
/// already in the prefix, so one scan suffices.
inline bool is_t_connected(const TemporalGraph& g) {
  if (g.edges.size() <= 1) return true;
  std::vector<char> seen(g.node_count(), 0);
  seen[g.edges[0].src] = seen[g.edges[0].dst] = 1;
  for (std::size_t i = 1; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (!seen[e.src] && !seen[e.dst]) return false;
    seen[e.src] = seen[e.dst] = 1;
  }
  return true;
}

inline bool has_aligned_timestamps(const TemporalGraph& g) {
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].t != i + 1) return false;
  return true;
}

/// Nodes that no edge touches are not allowed in a pattern.
inline bool is_pattern(const TemporalGraph& g) {
  if (!has_aligned_timestamps(g) || !is_t_connected(g)) return false;
  std::vector<char> touched(g.node_count(), 0);
  for (const auto& e : g.edges) touched[e.src] = touched[e.dst] = 1;
  return std::all_of(touched.begin(), touched.end(), [](char c) { return c != 0; });
}

/// Decides p1 =_t p2 with one scan over edges at equal timestamps, binding
/// the node map incrementally. Returns the unique (f, tau) on success.
/// `comparisons`, when given, is incremented once per node-map probe.
inline std::optional<Embedding> patterns_equal(const TemporalPattern& p1, const TemporalPattern& p2,
                                               std::size_t* comparisons = nullptr) {
  if (p1.edge_count() != p2.edge_count() || p1.node_count() != p2.node_count()) return std::nullopt;
  std::vector<NodeId> forward(p1.node_count(), kNoNode);
  std::vector<NodeId> backward(p2.node_count(), kNoNode);
  auto bind = [&](NodeId a, NodeId b) {
    if (comparisons) ++*comparisons;
    if (forward[a] == kNoNode && backward[b] == kNoNode) {
      if (p1.labels[a] != p2.labels[b]) return false;
      forward[a] = b;
      backward[b] = a;
      return true;
    }
    return forward[a] == b;
  };
  for (std::size_t i = 0; i < p1.edges.size(); ++i) {
    const auto& e1 = p1.edges[i];
    const auto& e2 = p2.edges[i];
    if (!bind(e1.src, e2.src) || !bind(e1.dst, e2.dst)) return std::nullopt;
  }
  if (std::find(forward.begin(), forward.end(), kNoNode) != forward.end()) return std::nullopt;
  Embedding m;
  m.nodeMap = std::move(forward);
  m.timeMap.reserve(p2.edges.size());
  for (const auto& e : p2.edges) m.timeMap.push_back(e.t);
  return m;
}

/// Re-maps timestamps to 1..|E| (order preserved) and compacts node ids in
/// first-visit order; nodes without edges are dropped. Edges need not be
/// sorted on input but must carry distinct timestamps.
inline TemporalPattern canonical_pattern(const TemporalGraph& g, bool strict = true) {
  std::vector<TemporalEdge> edges = g.edges;
  std::stable_sort(edges.begin(), edges.end(),
                   [](const TemporalEdge& a, const TemporalEdge& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].t == edges[i - 1].t)
      throw Error(ErrorCode::DuplicateTimestamp, "t=" + std::to_string(edges[i].t));
  TemporalPattern p;
  p.id = g.id;
  std::vector<NodeId> remap(g.node_count(), kNoNode);
  auto visit = [&](NodeId v) {
    if (remap[v] == kNoNode) {
      remap[v] = static_cast<NodeId>(p.labels.size());
      p.labels.push_back(g.labels[v]);
    }
    return remap[v];
  };
  p.edges.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    NodeId s = visit(edges[i].src);
    NodeId d = visit(edges[i].dst);
    p.edges.push_back({s, d, static_cast<Timestamp>(i + 1)});
  }
  if (strict && !is_t_connected(p)) throw Error(ErrorCode::NotTConnected, "pattern '" + g.id + "'");
  return p;
}

/// Sub-pattern formed by the given data edge positions (ascending).
inline TemporalPattern pattern_from_edges(const TemporalGraph& g, std::span<const std::uint32_t> edgeIdx,
                                          bool strict = true) {
  TemporalGraph sub;
  sub.labels = g.labels;
  for (auto i : edgeIdx) sub.edges.push_back(g.edges.at(i));
  return canonical_pattern(sub, strict);
}

/// Canonical edge-sequence text, e.g. "0:A>1:B 1:B>2:C". Equal for two
/// patterns iff they are =_t (given both are canonical).
inline std::string pattern_text(const TemporalPattern& p) {
  std::string out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto& e = p.edges[i];
    if (i) out += ' ';
    out += std::to_string(e.src) + ':' + p.labels[e.src].text() + '>' + std::to_string(e.dst) + ':' +
           p.labels[e.dst].text();
  }
  return out;
}

/// Checks that `m` is a valid temporal-subgraph witness of `pattern` in `data`:
/// labels preserved, node map injective, every pattern edge present and the
/// time map strictly increasing.
inline bool verify_embedding(const TemporalGraph& pattern, const TemporalGraph& data, const Embedding& m) {
  if (m.nodeMap.size() != pattern.node_count() || m.timeMap.size() != pattern.edge_count()) return false;
  std::vector<NodeId> used;
  for (NodeId v = 0; v < pattern.node_count(); ++v) {
    NodeId w = m.nodeMap[v];
    if (w >= data.node_count() || data.labels[w] != pattern.labels[v]) return false;
    used.push_back(w);
  }
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end()) return false;
  for (std::size_t i = 0; i < pattern.edges.size(); ++i) {
    if (i && m.timeMap[i] <= m.timeMap[i - 1]) return false;
    auto it = std::lower_bound(data.edges.begin(), data.edges.end(), m.timeMap[i],
                               [](const TemporalEdge& e, Timestamp t) { return e.t < t; });
    if (it == data.edges.end() || it->t != m.timeMap[i]) return false;
    const auto& pe = pattern.edges[i];
    if (it->src != m.nodeMap[pe.src] || it->dst != m.nodeMap[pe.dst]) return false;
  }
  return true;
}

}  // namespace tgminer
