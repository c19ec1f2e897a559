#pragma once

// Random small instances shared by the unit, property and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "tgminer/tgminer.hpp"

namespace tgtest {

using namespace tgminer;

inline TemporalGraph make_graph(const std::string& id, const std::vector<std::string>& labels,
                                const std::vector<TemporalEdge>& edges, ValidateOptions opts = {}) {
  return validate(RawGraph{id, labels, edges}, opts);
}

inline std::string label_of(std::size_t i) { return std::string(1, static_cast<char>('A' + i)); }

/// Random graph with distinct increasing timestamps (gaps allowed), no self-loops.
inline TemporalGraph random_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t edges, std::size_t labels,
                                  const std::string& id = "r") {
  std::uniform_int_distribution<std::size_t> node(0, nodes - 1), lab(0, labels - 1), gap(1, 3);
  RawGraph raw{id, {}, {}};
  for (std::size_t i = 0; i < nodes; ++i) raw.labels.push_back(label_of(lab(rng)));
  Timestamp t = 0;
  for (std::size_t i = 0; i < edges; ++i) {
    NodeId s = static_cast<NodeId>(node(rng)), d;
    do d = static_cast<NodeId>(node(rng)); while (d == s);
    t += gap(rng);
    raw.edges.push_back({s, d, t});
  }
  return validate(raw);
}

/// Random T-connected pattern taken from a walk over g's edges (so it usually
/// occurs in g); `size` edges or fewer when the walk gets stuck.
inline TemporalPattern random_subpattern(std::mt19937_64& rng, const TemporalGraph& g, std::size_t size) {
  if (g.edges.empty()) return {};
  std::uniform_int_distribution<std::size_t> pick(0, g.edges.size() - 1);
  std::vector<std::uint32_t> chosen{static_cast<std::uint32_t>(pick(rng))};
  std::vector<char> seen(g.node_count(), 0);
  seen[g.edges[chosen[0]].src] = seen[g.edges[chosen[0]].dst] = 1;
  // Grow in both time directions: collect edges touching the current node set.
  while (chosen.size() < size) {
    std::vector<std::uint32_t> options;
    for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      if (seen[g.edges[i].src] || seen[g.edges[i].dst]) options.push_back(i);
    }
    if (options.empty()) break;
    auto i = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    chosen.push_back(i);
    seen[g.edges[i].src] = seen[g.edges[i].dst] = 1;
  }
  std::sort(chosen.begin(), chosen.end());
  auto p = pattern_from_edges(g, chosen, false);
  // Keep the longest T-connected prefix.
  while (!is_t_connected(p)) {
    chosen.pop_back();
    p = pattern_from_edges(g, chosen, false);
  }
  return p;
}

/// Random T-connected pattern over `labels` labels, not tied to any graph.
inline TemporalPattern random_pattern(std::mt19937_64& rng, std::size_t size, std::size_t labels) {
  std::uniform_int_distribution<std::size_t> lab(0, labels - 1);
  TemporalPattern p;
  p.labels = {Label::intern(label_of(lab(rng))), Label::intern(label_of(lab(rng)))};
  p.edges.push_back({0, 1, 1});
  while (p.edges.size() < size) {
    const auto n = static_cast<NodeId>(p.labels.size());
    std::uniform_int_distribution<NodeId> old(0, n - 1);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: {
        NodeId s = old(rng), d;
        do d = old(rng); while (d == s);
        p.edges.push_back({s, d, 0});
        break;
      }
      case 1:
        p.edges.push_back({old(rng), n, 0});
        p.labels.push_back(Label::intern(label_of(lab(rng))));
        break;
      default:
        p.edges.push_back({n, old(rng), 0});
        p.labels.push_back(Label::intern(label_of(lab(rng))));
        break;
    }
    p.edges.back().t = p.edges.size();
  }
  return p;
}

struct MiningInstance {
  std::vector<TemporalGraph> positives;
  std::vector<TemporalGraph> negatives;
};

/// Desk-scale mining instance: up to 5 graphs per side, up to 8 edges each,
/// up to 4 labels.
inline MiningInstance random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> count(2, 5), nodes(3, 6), edges(4, 8), labels(2, 4);
  MiningInstance in;
  const std::size_t nl = labels(rng);
  const std::size_t np = count(rng), nn = count(rng);
  // Positives share a small core so that discriminative patterns exist.
  auto core = random_graph(rng, 3, 3, nl, "core");
  auto with_core = [&](const std::string& id, bool plant) {
    auto g = random_graph(rng, nodes(rng), edges(rng) - (plant ? 3 : 0), nl, id);
    if (!plant) return g;
    RawGraph raw{id, {}, {}};
    for (Label l : g.labels) raw.labels.push_back(l.text());
    const auto off = static_cast<NodeId>(raw.labels.size());
    for (Label l : core.labels) raw.labels.push_back(l.text());
    std::vector<TemporalEdge> all;
    for (const auto& e : g.edges) all.push_back({e.src, e.dst, 0});
    std::vector<TemporalEdge> extra;
    for (const auto& e : core.edges) extra.push_back({e.src + off, e.dst + off, 0});
    // Interleave core edges at random positions, keeping their order.
    std::vector<TemporalEdge> merged;
    std::size_t a = 0, b = 0;
    while (a < all.size() || b < extra.size()) {
      bool takeCore = b < extra.size() && (a == all.size() || std::bernoulli_distribution(0.4)(rng));
      merged.push_back(takeCore ? extra[b++] : all[a++]);
    }
    for (std::size_t i = 0; i < merged.size(); ++i) merged[i].t = 2 * i + 1;
    raw.edges = merged;
    return validate(raw);
  };
  for (std::size_t i = 0; i < np; ++i)
    in.positives.push_back(with_core("p" + std::to_string(i), std::bernoulli_distribution(0.8)(rng)));
  for (std::size_t i = 0; i < nn; ++i)
    in.negatives.push_back(with_core("n" + std::to_string(i), std::bernoulli_distribution(0.2)(rng)));
  return in;
}

}  // namespace tgtest
