#pragma once

// Brute-force reference implementations for tests. Deliberately simple and
// slow; nothing here calls the sequence-based subgraph test, the growth
// engine, the pruning code or canonical_pattern.

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tgminer/graph.hpp"
#include "tgminer/scoring.hpp"

namespace tgminer {

struct OracleBudget {
  std::size_t maxNodes = 64;
  std::size_t maxEdges = 64;
  std::size_t maxLabels = 64;
  double maxSeconds = 30.0;
};

namespace oracle_detail {

using Clock = std::chrono::steady_clock;

class Guard {
 public:
  explicit Guard(const OracleBudget& b) : budget_(b), deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                                                                   std::chrono::duration<double>(b.maxSeconds))) {}

  void admit(const TemporalGraph& g) const {
    if (g.node_count() > budget_.maxNodes || g.edge_count() > budget_.maxEdges)
      throw Error(ErrorCode::BudgetExceeded, "graph '" + g.id + "' exceeds the oracle size budget");
    std::vector<Label> ls(g.labels);
    std::sort(ls.begin(), ls.end());
    if (static_cast<std::size_t>(std::unique(ls.begin(), ls.end()) - ls.begin()) > budget_.maxLabels)
      throw Error(ErrorCode::BudgetExceeded, "graph '" + g.id + "' exceeds the oracle label budget");
  }

  void tick() {
    if (++ticks_ % 4096 == 0 && Clock::now() > deadline_)
      throw Error(ErrorCode::BudgetExceeded, "oracle time budget exhausted");
  }

 private:
  OracleBudget budget_;
  Clock::time_point deadline_;
  std::uint64_t ticks_ = 0;
};

// All (f, tau) of g1 in g2: walk g1's edges in time order, each picking a
// later g2 edge consistent with the node assignment so far; then place the
// nodes no edge touches.
inline void enumerate(const TemporalGraph& g1, const TemporalGraph& g2, Guard& guard,
                      const std::function<bool(const Embedding&)>& visit) {
  std::vector<NodeId> f(g1.node_count(), kNoNode);
  std::vector<int> taken(g2.node_count(), 0);
  std::vector<Timestamp> tau(g1.edge_count());
  std::vector<NodeId> loose;
  {
    std::vector<char> touched(g1.node_count(), 0);
    for (const auto& e : g1.edges) touched[e.src] = touched[e.dst] = 1;
    for (NodeId v = 0; v < g1.node_count(); ++v)
      if (!touched[v]) loose.push_back(v);
  }
  bool stop = false;

  std::function<void(std::size_t)> placeLoose = [&](std::size_t k) {
    if (stop) return;
    guard.tick();
    if (k == loose.size()) {
      if (!visit(Embedding{f, tau})) stop = true;
      return;
    }
    NodeId v = loose[k];
    for (NodeId w = 0; w < g2.node_count() && !stop; ++w) {
      if (taken[w] || g2.labels[w] != g1.labels[v]) continue;
      f[v] = w;
      taken[w] = 1;
      placeLoose(k + 1);
      taken[w] = 0;
      f[v] = kNoNode;
    }
  };

  std::function<void(std::size_t, std::size_t)> step = [&](std::size_t i, std::size_t from) {
    if (stop) return;
    guard.tick();
    if (i == g1.edges.size()) {
      placeLoose(0);
      return;
    }
    const auto& pe = g1.edges[i];
    for (std::size_t j = from; j < g2.edges.size() && !stop; ++j) {
      const auto& de = g2.edges[j];
      auto fits = [&](NodeId p, NodeId d) {
        return f[p] == kNoNode ? (!taken[d] && g1.labels[p] == g2.labels[d]) : f[p] == d;
      };
      if (!fits(pe.src, de.src)) continue;
      const bool bindS = f[pe.src] == kNoNode;
      if (bindS) {
        f[pe.src] = de.src;
        taken[de.src] = 1;
      }
      if (fits(pe.dst, de.dst)) {
        const bool bindD = f[pe.dst] == kNoNode;
        if (bindD) {
          f[pe.dst] = de.dst;
          taken[de.dst] = 1;
        }
        tau[i] = de.t;
        step(i + 1, j + 1);
        if (bindD) {
          taken[de.dst] = 0;
          f[pe.dst] = kNoNode;
        }
      }
      if (bindS) {
        taken[de.src] = 0;
        f[pe.src] = kNoNode;
      }
    }
  };
  step(0, 0);
}

// Text key of the pattern formed by an edge sequence: nodes renamed in
// order of first appearance, labels spelled out.
inline std::string key_of(const TemporalGraph& g, std::span<const std::size_t> edgeIdx) {
  std::map<NodeId, std::size_t> name;
  std::string key;
  auto nm = [&](NodeId v) {
    auto [it, fresh] = name.emplace(v, name.size());
    return std::to_string(it->second) + "/" + g.labels[v].text();
  };
  for (auto i : edgeIdx) key += nm(g.edges[i].src) + ">" + nm(g.edges[i].dst) + ";";
  return key;
}

inline TemporalGraph build(const TemporalGraph& g, std::span<const std::size_t> edgeIdx) {
  TemporalGraph p;
  std::map<NodeId, NodeId> name;
  auto nm = [&](NodeId v) {
    auto it = name.find(v);
    if (it != name.end()) return it->second;
    auto id = static_cast<NodeId>(p.labels.size());
    name.emplace(v, id);
    p.labels.push_back(g.labels[v]);
    return id;
  };
  for (std::size_t k = 0; k < edgeIdx.size(); ++k) {
    NodeId s = nm(g.edges[edgeIdx[k]].src);
    NodeId d = nm(g.edges[edgeIdx[k]].dst);
    p.edges.push_back({s, d, static_cast<Timestamp>(k + 1)});
  }
  return p;
}

}  // namespace oracle_detail

/// Every embedding (f, tau) of g1 in g2.
inline std::vector<Embedding> oracle_embeddings(const TemporalGraph& g1, const TemporalGraph& g2,
                                                const OracleBudget& budget = {}) {
  oracle_detail::Guard guard(budget);
  guard.admit(g1);
  guard.admit(g2);
  std::vector<Embedding> out;
  oracle_detail::enumerate(g1, g2, guard, [&](const Embedding& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

inline std::optional<Embedding> oracle_subgraph_test(const TemporalGraph& g1, const TemporalGraph& g2,
                                                     const OracleBudget& budget = {}) {
  oracle_detail::Guard guard(budget);
  guard.admit(g1);
  guard.admit(g2);
  std::optional<Embedding> found;
  oracle_detail::enumerate(g1, g2, guard, [&](const Embedding& m) {
    found = m;
    return false;
  });
  return found;
}

/// Every T-connected pattern of 1..maxEdges edges occurring in some graph,
/// keyed by an oracle-local canonical text.
inline std::map<std::string, TemporalPattern> oracle_enumerate_patterns(std::span<const TemporalGraph> graphs,
                                                                        std::size_t maxEdges,
                                                                        const OracleBudget& budget = {}) {
  oracle_detail::Guard guard(budget);
  std::map<std::string, TemporalPattern> out;
  for (const auto& g : graphs) {
    guard.admit(g);
    std::vector<std::size_t> chosen;
    std::vector<int> seen(g.node_count(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      guard.tick();
      if (!chosen.empty()) {
        auto key = oracle_detail::key_of(g, chosen);
        if (!out.contains(key)) out.emplace(std::move(key), oracle_detail::build(g, chosen));
      }
      if (chosen.size() == maxEdges) return;
      for (std::size_t j = from; j < g.edges.size(); ++j) {
        const auto& e = g.edges[j];
        if (e.src == e.dst) continue;
        if (!chosen.empty() && !seen[e.src] && !seen[e.dst]) continue;
        chosen.push_back(j);
        ++seen[e.src];
        ++seen[e.dst];
        rec(j + 1);
        --seen[e.src];
        --seen[e.dst];
        chosen.pop_back();
      }
    };
    rec(0);
  }
  return out;
}

/// Canonical key of a whole pattern, matching oracle_enumerate_patterns keys.
inline std::string oracle_key(const TemporalPattern& p) {
  std::vector<std::size_t> all(p.edge_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::size_t> order(all);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p.edges[a].t < p.edges[b].t; });
  return oracle_detail::key_of(p, order);
}

inline std::size_t oracle_support(const TemporalPattern& p, std::span<const TemporalGraph> graphs,
                                  const OracleBudget& budget = {}) {
  std::size_t n = 0;
  for (const auto& g : graphs)
    if (oracle_subgraph_test(p, g, budget)) ++n;
  return n;
}

struct OracleBest {
  double score = -std::numeric_limits<double>::infinity();
  std::map<std::string, TemporalPattern> maximizers;
  std::size_t patterns = 0;
};

/// Scores every pattern occurring in either set and returns the maximizers.
inline OracleBest oracle_best_score(std::span<const TemporalGraph> positives, std::span<const TemporalGraph> negatives,
                                    std::size_t maxEdges, ScoreFunction fn, const OracleBudget& budget = {}) {
  std::vector<TemporalGraph> all(positives.begin(), positives.end());
  all.insert(all.end(), negatives.begin(), negatives.end());
  auto patterns = oracle_enumerate_patterns(all, maxEdges, budget);
  fn.positives = static_cast<double>(positives.size());
  fn.negatives = static_cast<double>(negatives.size());
  OracleBest best;
  best.patterns = patterns.size();
  for (auto& [key, p] : patterns) {
    const double x = static_cast<double>(oracle_support(p, positives, budget)) / static_cast<double>(positives.size());
    const double y = static_cast<double>(oracle_support(p, negatives, budget)) / static_cast<double>(negatives.size());
    const double s = score(fn, x, y);
    if (s > best.score) {
      best.score = s;
      best.maximizers.clear();
    }
    if (s == best.score) best.maximizers.emplace(key, p);
  }
  return best;
}

/// Per graph, the sorted residual sizes (edges after the last matched edge)
/// of every embedding of p.
inline std::vector<std::vector<std::size_t>> oracle_residual_sizes(const TemporalPattern& p,
                                                                   std::span<const TemporalGraph> graphs,
                                                                   const OracleBudget& budget = {}) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& g : graphs) {
    std::vector<std::size_t> sizes;
    for (const auto& m : oracle_embeddings(p, g, budget)) {
      const Timestamp cut = m.timeMap.empty() ? 0 : *std::max_element(m.timeMap.begin(), m.timeMap.end());
      std::size_t later = 0;
      for (const auto& e : g.edges)
        if (m.timeMap.empty() || e.t > cut) ++later;
      sizes.push_back(later);
    }
    std::sort(sizes.begin(), sizes.end());
    out.push_back(std::move(sizes));
  }
  return out;
}

inline bool oracle_residual_equal(const TemporalPattern& g1, const TemporalPattern& g2,
                                  std::span<const TemporalGraph> graphs, const OracleBudget& budget = {}) {
  return oracle_residual_sizes(g1, graphs, budget) == oracle_residual_sizes(g2, graphs, budget);
}

inline std::uint64_t oracle_residual_sum(const TemporalPattern& p, std::span<const TemporalGraph> graphs,
                                         const OracleBudget& budget = {}) {
  std::uint64_t s = 0;
  for (const auto& per : oracle_residual_sizes(p, graphs, budget))
    for (auto v : per) s += v;
  return s;
}

}  // namespace tgminer
