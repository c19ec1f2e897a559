#pragma once

// Temporal subgraph test over sequence encodings.
//
// A temporal graph is encoded by three sequences built in one pass over its
// edges in time order: the node sequence (first-visit order), the edge
// sequence, and the enhanced node sequence, in which a node may repeat so
// that every node a later edge needs appears after the nodes bound before
// it. g1 is a temporal subgraph of g2 iff some injective node map realised
// by a subsequence match of nodeseq(g1) into enhseq(g2) also maps
// edgeseq(g1) onto a subsequence of edgeseq(g2).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tgminer/graph.hpp"

namespace tgminer {

struct SeqNode {
  NodeId node = 0;
  Label label;
  friend bool operator==(const SeqNode&, const SeqNode&) = default;
};

struct SeqEdge {
  NodeId src = 0;
  NodeId dst = 0;
  friend bool operator==(const SeqEdge&, const SeqEdge&) = default;
};

struct SequenceEncoding {
  std::vector<SeqNode> nodeSeq;
  std::vector<SeqEdge> edgeSeq;
  std::vector<SeqNode> enhSeq;
};

inline SequenceEncoding encode(const TemporalGraph& g) {
  SequenceEncoding enc;
  enc.edgeSeq.reserve(g.edge_count());
  enc.enhSeq.reserve(2 * g.edge_count());
  std::vector<char> visited(g.node_count(), 0);
  auto first_visit = [&](NodeId v) {
    if (!visited[v]) {
      visited[v] = 1;
      enc.nodeSeq.push_back({v, g.labels[v]});
    }
  };
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    first_visit(e.src);
    first_visit(e.dst);
    enc.edgeSeq.push_back({e.src, e.dst});
    bool lastAdded = !enc.enhSeq.empty() && enc.enhSeq.back().node == e.src;
    bool previousSource = i > 0 && g.edges[i - 1].src == e.src;
    if (!lastAdded && !previousSource) enc.enhSeq.push_back({e.src, g.labels[e.src]});
    enc.enhSeq.push_back({e.dst, g.labels[e.dst]});
  }
  return enc;
}

/// Greedy left-to-right subsequence test, O(|s2|).
template <class A, class B, class Eq>
bool is_subsequence(std::span<const A> s1, std::span<const B> s2, Eq eq) {
  std::size_t i = 0;
  for (std::size_t j = 0; j < s2.size() && i < s1.size(); ++j)
    if (eq(s1[i], s2[j])) ++i;
  return i == s1.size();
}

template <class T>
bool is_subsequence(std::span<const T> s1, std::span<const T> s2) {
  return is_subsequence(s1, s2, std::equal_to<T>{});
}

struct SubisoOptions {
  bool labelSequenceTest = true;
  bool localInfoMatch = true;
  bool prefixPruning = true;
  std::size_t prefixMemoCap = std::size_t{1} << 20;
};

struct SubisoStats {
  std::size_t calls = 0;
  std::size_t labelRejects = 0;
  std::size_t localRejects = 0;
  std::size_t prefixHits = 0;
  std::size_t mappingsCompleted = 0;
  std::size_t nodesExpanded = 0;
};

namespace detail {

// Per-node local structure: in/out degree and the label sequences of
// neighbours along out- and in-edges in time order.
struct LocalInfo {
  std::vector<std::vector<Label>> outSeq;
  std::vector<std::vector<Label>> inSeq;

  explicit LocalInfo(const TemporalGraph& g) : outSeq(g.node_count()), inSeq(g.node_count()) {
    for (const auto& e : g.edges) {
      outSeq[e.src].push_back(g.labels[e.dst]);
      inSeq[e.dst].push_back(g.labels[e.src]);
    }
  }

  // Necessary condition for mapping pattern node p (in `pat`) to data node d.
  bool admits(const LocalInfo& pat, NodeId p, NodeId d) const {
    const auto& po = pat.outSeq[p];
    const auto& pi = pat.inSeq[p];
    const auto& dout = outSeq[d];
    const auto& din = inSeq[d];
    if (po.size() > dout.size() || pi.size() > din.size()) return false;
    return is_subsequence(std::span<const Label>(po), std::span<const Label>(dout)) &&
           is_subsequence(std::span<const Label>(pi), std::span<const Label>(din));
  }
};

struct VectorHash {
  std::size_t operator()(const std::vector<NodeId>& v) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ v.size();
    for (auto x : v) {
      h ^= x + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

/// Data-graph side of a subgraph test, precomputed once and reused across
/// calls. Holds a reference to the graph, which must outlive it.
class SubisoTarget {
 public:
  explicit SubisoTarget(const TemporalGraph& g) : graph_(&g), enc_(encode(g)), local_(g), outPos_(g.node_count()) {
    for (std::uint32_t i = 0; i < g.edges.size(); ++i) outPos_[g.edges[i].src].push_back(i);
    for (const auto& n : enc_.enhSeq) enhLabels_.push_back(n.label);
    for (const auto& e : g.edges) edgeLabels_.emplace_back(g.labels[e.src], g.labels[e.dst]);
  }

  const TemporalGraph& graph() const noexcept { return *graph_; }
  const SequenceEncoding& encoding() const noexcept { return enc_; }
  const detail::LocalInfo& local() const noexcept { return local_; }
  std::span<const Label> enh_labels() const noexcept { return enhLabels_; }
  std::span<const std::pair<Label, Label>> edge_labels() const noexcept { return edgeLabels_; }

  // First edge position > after (or >= 0 when after < 0) from src to dst.
  std::int64_t next_edge(NodeId src, NodeId dst, std::int64_t after) const {
    const auto& list = outPos_[src];
    auto it = std::upper_bound(list.begin(), list.end(), after,
                               [](std::int64_t a, std::uint32_t b) { return a < static_cast<std::int64_t>(b); });
    for (; it != list.end(); ++it)
      if (graph_->edges[*it].dst == dst) return *it;
    return -1;
  }

 private:
  const TemporalGraph* graph_;
  SequenceEncoding enc_;
  detail::LocalInfo local_;
  std::vector<std::vector<std::uint32_t>> outPos_;
  std::vector<Label> enhLabels_;
  std::vector<std::pair<Label, Label>> edgeLabels_;
};

namespace detail {

class SubisoSearch {
 public:
  using Visitor = std::function<bool(const Embedding&)>;  // return false to stop

  SubisoSearch(const TemporalGraph& pattern, const SubisoTarget& target, const SubisoOptions& opts,
               SubisoStats* stats)
      : p_(pattern), t_(target), opts_(opts), stats_(stats), enc_(encode(pattern)), local_(pattern) {
    order_.assign(p_.node_count(), kNoNode);
    for (std::size_t k = 0; k < enc_.nodeSeq.size(); ++k) order_[enc_.nodeSeq[k].node] = static_cast<NodeId>(k);
    map_.assign(p_.node_count(), kNoNode);
    used_.assign(t_.graph().node_count(), 0);
    matched_.assign(p_.edge_count(), 0);
  }

  // Returns the number of distinct node maps reported (each with a witness).
  std::size_t run(std::size_t limit, const Visitor& visit) {
    if (stats_) ++stats_->calls;
    limit_ = limit;
    visit_ = &visit;
    collect_isolated();
    if (opts_.labelSequenceTest && !label_sequences_hold()) {
      if (stats_) ++stats_->labelRejects;
      return 0;
    }
    if (!enc_.nodeSeq.empty() && enc_.nodeSeq.size() > t_.encoding().enhSeq.size()) return 0;
    search(0, -1, 0, -1);
    return reported_;
  }

 private:
  bool label_sequences_hold() const {
    std::vector<Label> nodeLabels;
    for (const auto& n : enc_.nodeSeq) nodeLabels.push_back(n.label);
    if (!is_subsequence(std::span<const Label>(nodeLabels), t_.enh_labels())) return false;
    std::vector<std::pair<Label, Label>> edgeLabels;
    for (const auto& e : p_.edges) edgeLabels.emplace_back(p_.labels[e.src], p_.labels[e.dst]);
    return is_subsequence(std::span<const std::pair<Label, Label>>(edgeLabels), t_.edge_labels());
  }

  // Nodes without edges only need distinct same-label images; they are
  // assigned after the edge-bearing nodes.
  void collect_isolated() {
    for (NodeId v = 0; v < p_.node_count(); ++v)
      if (order_[v] == kNoNode) isolated_.push_back(v);
  }

  bool assign_isolated(std::vector<NodeId>& map) const {
    if (isolated_.empty()) return true;
    std::vector<char> used = used_;
    const auto& g = t_.graph();
    for (NodeId v : isolated_) {
      NodeId pick = kNoNode;
      for (NodeId w = 0; w < g.node_count(); ++w)
        if (!used[w] && g.labels[w] == p_.labels[v]) {
          pick = w;
          break;
        }
      if (pick == kNoNode) return false;
      used[pick] = 1;
      map[v] = pick;
    }
    return true;
  }

  // k: nodes of nodeSeq bound so far; pos: enhSeq position of the last
  // binding; j: pattern edges matched; q: edgeSeq position of the last match.
  // Returns true when the caller should stop.
  bool search(std::size_t k, std::int64_t pos, std::size_t j, std::int64_t q) {
    if (stats_) ++stats_->nodesExpanded;
    // Match every pattern edge whose endpoints are both bound. Greedy
    // earliest matching is optimal for subsequence existence.
    while (j < p_.edge_count()) {
      const auto& e = p_.edges[j];
      if (order_[e.src] >= k || order_[e.dst] >= k) break;
      auto next = t_.next_edge(map_[e.src], map_[e.dst], q);
      if (next < 0) return false;
      matched_[j] = static_cast<std::uint32_t>(next);
      q = next;
      ++j;
    }
    if (k == enc_.nodeSeq.size()) {
      if (j != p_.edge_count()) return false;
      return report();
    }
    const NodeId pnode = enc_.nodeSeq[k].node;
    const Label want = enc_.nodeSeq[k].label;
    const auto& enh = t_.encoding().enhSeq;
    const std::size_t remaining = enc_.nodeSeq.size() - k - 1;
    for (std::size_t p = static_cast<std::size_t>(pos + 1); p + remaining < enh.size(); ++p) {
      const NodeId d = enh[p].node;
      if (enh[p].label != want || used_[d]) continue;
      if (opts_.localInfoMatch && !t_.local().admits(local_, pnode, d)) {
        if (stats_) ++stats_->localRejects;
        continue;
      }
      map_[pnode] = d;
      used_[d] = 1;
      bool skip = false;
      if (opts_.prefixPruning) {
        key_.clear();
        for (std::size_t i = 0; i <= k; ++i) key_.push_back(map_[enc_.nodeSeq[i].node]);
        if (memo_.contains(key_)) {
          skip = true;
          if (stats_) ++stats_->prefixHits;
        } else if (memo_.size() < opts_.prefixMemoCap) {
          memo_.insert(key_);
        }
      }
      bool stop = !skip && search(k + 1, static_cast<std::int64_t>(p), j, q);
      used_[d] = 0;
      map_[pnode] = kNoNode;
      if (stop) return true;
    }
    return false;
  }

  bool report() {
    if (stats_) ++stats_->mappingsCompleted;
    std::vector<NodeId> map = map_;
    if (!assign_isolated(map)) return false;
    if (!seen_.insert(map).second) return false;
    Embedding m;
    m.nodeMap = std::move(map);
    m.timeMap.reserve(p_.edge_count());
    for (auto idx : matched_) m.timeMap.push_back(t_.graph().edges[idx].t);
    ++reported_;
    if (!(*visit_)(m)) return true;
    return reported_ >= limit_;
  }

  const TemporalGraph& p_;
  const SubisoTarget& t_;
  const SubisoOptions& opts_;
  SubisoStats* stats_;
  SequenceEncoding enc_;
  LocalInfo local_;
  std::vector<NodeId> order_;
  std::vector<NodeId> map_;
  std::vector<char> used_;
  std::vector<std::uint32_t> matched_;
  std::vector<NodeId> isolated_;
  std::vector<NodeId> key_;
  std::unordered_set<std::vector<NodeId>, VectorHash> memo_;
  std::unordered_set<std::vector<NodeId>, VectorHash> seen_;
  std::size_t limit_ = 1;
  std::size_t reported_ = 0;
  const Visitor* visit_ = nullptr;
};

}  // namespace detail

/// Returns a witness embedding iff g1 is a temporal subgraph of g2.
inline std::optional<Embedding> temporal_subgraph_test(const TemporalGraph& g1, const SubisoTarget& g2,
                                                       const SubisoOptions& opts = {},
                                                       SubisoStats* stats = nullptr) {
  std::optional<Embedding> found;
  detail::SubisoSearch search(g1, g2, opts, stats);
  search.run(1, [&](const Embedding& m) {
    found = m;
    return false;
  });
  return found;
}

inline std::optional<Embedding> temporal_subgraph_test(const TemporalGraph& g1, const TemporalGraph& g2,
                                                       const SubisoOptions& opts = {},
                                                       SubisoStats* stats = nullptr) {
  SubisoTarget target(g2);
  return temporal_subgraph_test(g1, target, opts, stats);
}

/// Reports up to `limit` embeddings of g1 in g2 with pairwise distinct node
/// maps (one witness per node map). Returns how many were reported.
inline std::size_t enumerate_node_mappings(const TemporalGraph& g1, const SubisoTarget& g2, std::size_t limit,
                                           const std::function<bool(const Embedding&)>& visit,
                                           const SubisoOptions& opts = {}, SubisoStats* stats = nullptr) {
  if (limit == 0) return 0;
  detail::SubisoSearch search(g1, g2, opts, stats);
  return search.run(limit, visit);
}

}  // namespace tgminer
