#pragma once

// Dataset text format, one block per graph:
//
//   g <id> <positive|negative|test>
//   v <idx> <label>        (idx dense from 0, in order)
//   e <src> <dst> <t>
//
// Blank lines and `#` comments are ignored.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "tgminer/graph.hpp"
#include "tgminer/growth.hpp"
#include "tgminer/matcher.hpp"

namespace tgminer {

enum class GraphRole { Positive, Negative, Test };

inline const char* to_string(GraphRole r) {
  switch (r) {
    case GraphRole::Positive: return "positive";
    case GraphRole::Negative: return "negative";
    case GraphRole::Test: return "test";
  }
  return "?";
}

struct Dataset {
  std::vector<TemporalGraph> positives;
  std::vector<TemporalGraph> negatives;
  std::vector<TemporalGraph> tests;

  std::size_t size() const { return positives.size() + negatives.size() + tests.size(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class TiePolicy { Reject, InputOrder };

inline TiePolicy parse_tie_policy(std::string_view s) {
  if (s == "reject") return TiePolicy::Reject;
  if (s == "inputOrder" || s == "input-order") return TiePolicy::InputOrder;
  throw Error(ErrorCode::ConfigInvalid, "unknown tie policy '" + std::string(s) + "'");
}

/// Orders events by timestamp. Under InputOrder, events sharing a timestamp
/// keep their input order and are moved to the next free timestamps
/// (t' = max(t, previous t' + 1)), so all non-tied order relations survive.
inline std::vector<TemporalEdge> sequentialize_ties(std::vector<TemporalEdge> events, TiePolicy policy) {
  std::stable_sort(events.begin(), events.end(),
                   [](const TemporalEdge& a, const TemporalEdge& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].t > events[i - 1].t) continue;
    if (policy == TiePolicy::Reject)
      throw Error(ErrorCode::TieRejected, "two events at t=" + std::to_string(events[i].t));
    events[i].t = events[i - 1].t + 1;
  }
  return events;
}

struct LoadOptions {
  TiePolicy ties = TiePolicy::Reject;
  ValidateOptions validate;
};

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

inline Dataset parse_dataset(std::istream& in, const LoadOptions& opts = {}) {
  Dataset ds;
  RawGraph raw;
  GraphRole role = GraphRole::Positive;
  bool open = false;
  std::set<std::string> ids;
  auto flush = [&] {
    if (!open) return;
    raw.edges = sequentialize_ties(std::move(raw.edges), opts.ties);
    auto g = validate(raw, opts.validate);
    switch (role) {
      case GraphRole::Positive: ds.positives.push_back(std::move(g)); break;
      case GraphRole::Negative: ds.negatives.push_back(std::move(g)); break;
      case GraphRole::Test: ds.tests.push_back(std::move(g)); break;
    }
    raw = RawGraph{};
    open = false;
  };
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::string extra;
    if (kw == "g") {
      flush();
      std::string id, r;
      if (!(ls >> id >> r) || (ls >> extra)) detail::parse_fail(lineNo, "expected 'g <id> <role>'");
      if (r == "positive") role = GraphRole::Positive;
      else if (r == "negative") role = GraphRole::Negative;
      else if (r == "test") role = GraphRole::Test;
      else detail::parse_fail(lineNo, "unknown role '" + r + "'");
      if (!ids.insert(id).second) detail::parse_fail(lineNo, "duplicate graph id '" + id + "'");
      raw.id = id;
      open = true;
    } else if (kw == "v") {
      if (!open) detail::parse_fail(lineNo, "'v' before any 'g'");
      long long idx;
      std::string label;
      if (!(ls >> idx >> label) || (ls >> extra)) detail::parse_fail(lineNo, "expected 'v <idx> <label>'");
      if (idx != static_cast<long long>(raw.labels.size()))
        detail::parse_fail(lineNo, "node index " + std::to_string(idx) + " out of order (expected " +
                                       std::to_string(raw.labels.size()) + ")");
      raw.labels.push_back(label);
    } else if (kw == "e") {
      if (!open) detail::parse_fail(lineNo, "'e' before any 'g'");
      long long s, d, t;
      if (!(ls >> s >> d >> t) || (ls >> extra)) detail::parse_fail(lineNo, "expected 'e <src> <dst> <t>'");
      if (s < 0 || d < 0 || t < 0) detail::parse_fail(lineNo, "negative field");
      if (s >= static_cast<long long>(raw.labels.size()) || d >= static_cast<long long>(raw.labels.size()))
        detail::parse_fail(lineNo, "edge endpoint not declared by a preceding 'v' line");
      raw.edges.push_back({static_cast<NodeId>(s), static_cast<NodeId>(d), static_cast<Timestamp>(t)});
    } else {
      detail::parse_fail(lineNo, "unknown record '" + kw + "'");
    }
  }
  flush();
  return ds;
}

inline Dataset load_dataset(const std::string& path, const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  return parse_dataset(in, opts);
}

inline void write_graph(std::ostream& out, const TemporalGraph& g, GraphRole role) {
  out << "g " << g.id << ' ' << to_string(role) << '\n';
  for (std::size_t i = 0; i < g.labels.size(); ++i) out << "v " << i << ' ' << g.labels[i].text() << '\n';
  for (const auto& e : g.edges) out << "e " << e.src << ' ' << e.dst << ' ' << e.t << '\n';
}

inline void write_dataset(std::ostream& out, const Dataset& ds) {
  for (const auto& g : ds.positives) write_graph(out, g, GraphRole::Positive);
  for (const auto& g : ds.negatives) write_graph(out, g, GraphRole::Negative);
  for (const auto& g : ds.tests) write_graph(out, g, GraphRole::Test);
}

inline void save_dataset(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  write_dataset(out, ds);
}

struct DatasetStats {
  std::size_t graphs = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t labels = 0;
  double avgNodes = 0.0;
  double avgEdges = 0.0;
};

inline DatasetStats dataset_stats(std::span<const TemporalGraph> graphs) {
  DatasetStats s;
  std::unordered_set<Label> labels;
  for (const auto& g : graphs) {
    ++s.graphs;
    s.nodes += g.node_count();
    s.edges += g.edge_count();
    labels.insert(g.labels.begin(), g.labels.end());
  }
  s.labels = labels.size();
  if (s.graphs) {
    s.avgNodes = static_cast<double>(s.nodes) / static_cast<double>(s.graphs);
    s.avgEdges = static_cast<double>(s.edges) / static_cast<double>(s.graphs);
  }
  return s;
}

/// Each graph repeated k times; copies get ids "<id>.r<j>" (k = 1 keeps ids).
inline Dataset replicate(const Dataset& ds, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::ConfigInvalid, "replication factor must be at least 1");
  if (k == 1) return ds;
  auto rep = [k](const std::vector<TemporalGraph>& in) {
    std::vector<TemporalGraph> out;
    out.reserve(in.size() * k);
    for (const auto& g : in)
      for (std::size_t j = 0; j < k; ++j) {
        out.push_back(g);
        out.back().id = g.id + ".r" + std::to_string(j);
      }
    return out;
  };
  return {rep(ds.positives), rep(ds.negatives), rep(ds.tests)};
}

/// Parameters of a synthetic corpus: background graphs with Zipf-distributed
/// node labels, and one planted behavior pattern woven into every positive
/// graph (plantRate < 1 leaves some positives without it).
struct SyntheticSpec {
  std::size_t nPositive = 100;
  std::size_t nNegative = 100;
  std::size_t backgroundNodes = 65;
  std::size_t backgroundEdges = 120;
  std::size_t alphabet = 94;
  double zipf = 1.2;
  std::size_t plantedEdges = 6;
  std::vector<std::string> plantedLabels;  // drawn from the alphabet when empty
  double plantRate = 1.0;
  std::size_t testEpisodes = 40;
  double testPlantRate = 0.5;
  std::string behavior = "planted";
  std::uint64_t seed = 1;
};

inline SyntheticSpec preset(std::string_view name) {
  SyntheticSpec s;
  if (name == "small") {
    s.backgroundNodes = 25;
    s.backgroundEdges = 35;
    s.alphabet = 40;
  } else if (name == "medium") {
    // defaults
  } else if (name == "large") {
    s.backgroundNodes = 250;
    s.backgroundEdges = 800;
    s.alphabet = 200;
  } else {
    throw Error(ErrorCode::SpecInvalid, "unknown preset '" + std::string(name) + "'");
  }
  return s;
}

inline void check_spec(const SyntheticSpec& s) {
  auto bad = [](const std::string& why) { throw Error(ErrorCode::SpecInvalid, why); };
  if (s.backgroundNodes < 2 && s.backgroundEdges > 0) bad("background edges need at least two nodes");
  if (s.alphabet < 1) bad("alphabet must be non-empty");
  if (!(s.zipf >= 0.0)) bad("zipf exponent must be non-negative");
  if (s.plantedEdges < 1) bad("planted pattern needs at least one edge");
  if (!s.plantedLabels.empty() && s.plantedLabels.size() < 2) bad("planted labels: at least two");
  if (s.plantRate < 0.0 || s.plantRate > 1.0) bad("plantRate outside [0,1]");
  if (s.testPlantRate < 0.0 || s.testPlantRate > 1.0) bad("testPlantRate outside [0,1]");
  if (s.behavior.empty() || s.behavior.find_first_of(" \t\n") != std::string::npos) bad("behavior name must be one word");
}

struct SyntheticCorpus {
  Dataset data;
  GroundTruth truth;  // intervals of planted instances in the test graph
  TemporalPattern planted;
};

namespace detail {

class SyntheticBuilder {
 public:
  explicit SyntheticBuilder(const SyntheticSpec& spec) : spec_(spec), rng_(spec.seed) {
    std::vector<double> w(spec.alphabet);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / std::pow(static_cast<double>(i + 1), spec.zipf);
    zipf_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
  }

  static std::string label_name(std::size_t i) { return "L" + std::to_string(i); }

  TemporalPattern make_pattern() {
    TemporalPattern p;
    auto pick = [&] {
      if (!spec_.plantedLabels.empty())
        return Label::intern(spec_.plantedLabels[uniform(spec_.plantedLabels.size())]);
      return Label::intern(label_name(uniform(spec_.alphabet)));
    };
    p.labels = {pick(), pick()};
    p.edges.push_back({0, 1, 1});
    while (p.edges.size() < spec_.plantedEdges) {
      const auto n = static_cast<NodeId>(p.labels.size());
      const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
      NodeId s, d;
      if (r < 0.2 && n >= 2) {
        s = static_cast<NodeId>(uniform(n));
        do d = static_cast<NodeId>(uniform(n)); while (d == s);
      } else if (r < 0.6) {
        s = static_cast<NodeId>(uniform(n));
        d = n;
        p.labels.push_back(pick());
      } else {
        d = static_cast<NodeId>(uniform(n));
        s = n;
        p.labels.push_back(pick());
      }
      p.edges.push_back({s, d, static_cast<Timestamp>(p.edges.size() + 1)});
    }
    return p;
  }

  // Background graph, plus the pattern on fresh nodes when `plant`. Returns
  // the planted edges' timestamps through `plantedTimes`.
  TemporalGraph make_graph(const std::string& id, const TemporalPattern* plant, Timestamp base,
                           std::vector<Timestamp>* plantedTimes) {
    TemporalGraph g;
    g.id = id;
    for (std::size_t i = 0; i < spec_.backgroundNodes; ++i) g.labels.push_back(Label::intern(label_name(zipf_(rng_))));
    std::vector<TemporalEdge> bg;
    for (std::size_t i = 0; i < spec_.backgroundEdges; ++i) {
      auto s = static_cast<NodeId>(uniform(spec_.backgroundNodes));
      NodeId d;
      do d = static_cast<NodeId>(uniform(spec_.backgroundNodes)); while (d == s);
      bg.push_back({s, d, 0});
    }
    const std::size_t total = bg.size() + (plant ? plant->edge_count() : 0);
    std::vector<char> isPlanted(total, 0);
    if (plant) {
      std::vector<std::size_t> slots(total);
      for (std::size_t i = 0; i < total; ++i) slots[i] = i;
      std::shuffle(slots.begin(), slots.end(), rng_);
      for (std::size_t i = 0; i < plant->edge_count(); ++i) isPlanted[slots[i]] = 1;
    }
    const auto offset = static_cast<NodeId>(g.labels.size());
    if (plant) g.labels.insert(g.labels.end(), plant->labels.begin(), plant->labels.end());
    std::size_t nextBg = 0, nextPl = 0;
    for (std::size_t i = 0; i < total; ++i) {
      const Timestamp t = base + i + 1;
      if (isPlanted[i]) {
        const auto& pe = plant->edges[nextPl++];
        g.edges.push_back({pe.src + offset, pe.dst + offset, t});
        if (plantedTimes) plantedTimes->push_back(t);
      } else {
        auto e = bg[nextBg++];
        e.t = t;
        g.edges.push_back(e);
      }
    }
    return g;
  }

  bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

 private:
  std::size_t uniform(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  const SyntheticSpec& spec_;
  std::mt19937_64 rng_;
  std::discrete_distribution<std::size_t> zipf_;
};

// Disjoint union of graphs laid out one after another in time.
inline void append_graph(TemporalGraph& into, const TemporalGraph& g) {
  const auto offset = static_cast<NodeId>(into.labels.size());
  into.labels.insert(into.labels.end(), g.labels.begin(), g.labels.end());
  for (const auto& e : g.edges) into.edges.push_back({e.src + offset, e.dst + offset, e.t});
}

}  // namespace detail

/// Positives weave the planted pattern into background edges (order kept),
/// negatives are background only, and one test graph strings together
/// episodes separated by idle gaps, a testPlantRate share of them holding a
/// planted instance whose [first, last] edge times form the ground truth.
inline SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  check_spec(spec);
  detail::SyntheticBuilder b(spec);
  SyntheticCorpus c;
  c.planted = b.make_pattern();
  for (std::size_t i = 0; i < spec.nPositive; ++i) {
    const bool plant = b.coin(spec.plantRate);
    c.data.positives.push_back(b.make_graph("p" + std::to_string(i), plant ? &c.planted : nullptr, 0, nullptr));
  }
  for (std::size_t i = 0; i < spec.nNegative; ++i)
    c.data.negatives.push_back(b.make_graph("n" + std::to_string(i), nullptr, 0, nullptr));
  if (spec.testEpisodes > 0) {
    TemporalGraph test;
    test.id = "test";
    const Timestamp span = spec.backgroundEdges + spec.plantedEdges;
    const Timestamp gap = 10 * span + 10;
    for (std::size_t k = 0; k < spec.testEpisodes; ++k) {
      const bool plant = b.coin(spec.testPlantRate);
      std::vector<Timestamp> times;
      auto ep = b.make_graph("ep", plant ? &c.planted : nullptr, k * (span + gap), &times);
      detail::append_graph(test, ep);
      if (plant) c.truth.push_back({spec.behavior, times.front(), times.back()});
    }
    c.data.tests.push_back(std::move(test));
  }
  return c;
}

/// Longest span (last minus first edge time) over a set of graphs.
inline Timestamp longest_duration(std::span<const TemporalGraph> graphs) {
  Timestamp best = 0;
  for (const auto& g : graphs)
    if (!g.edges.empty()) best = std::max(best, g.edges.back().t - g.edges.front().t);
  return best;
}

}  // namespace tgminer
