#pragma once

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "tgminer/graph.hpp"

namespace tgminer {

/// One identified behavior instance: a match and its time interval.
struct Instance {
  Embedding embedding;
  Timestamp start = 0;
  Timestamp end = 0;
};

struct TruthInterval {
  std::string behavior;
  Timestamp start = 0;
  Timestamp end = 0;
};

using GroundTruth = std::vector<TruthInterval>;

struct MatchOptions {
  std::optional<std::size_t> limit;
  // Largest allowed end - start of an instance; unbounded when unset.
  std::optional<Timestamp> window;
  // Start positions handled per shard.
  std::size_t shardSize = 4096;
};

/// Per-node edge position lists of a data graph, built once per test graph.
class MatchIndex {
 public:
  explicit MatchIndex(const TemporalGraph& g) : graph_(&g), out_(g.node_count()), in_(g.node_count()) {
    for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
      out_[g.edges[i].src].push_back(i);
      in_[g.edges[i].dst].push_back(i);
    }
  }
  const TemporalGraph& graph() const { return *graph_; }
  const std::vector<std::uint32_t>& out(NodeId v) const { return out_[v]; }
  const std::vector<std::uint32_t>& in(NodeId v) const { return in_[v]; }

 private:
  const TemporalGraph* graph_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
};

namespace detail {

class InstanceSearch {
 public:
  InstanceSearch(const TemporalPattern& p, const MatchIndex& idx, const MatchOptions& opts)
      : p_(p), g_(idx.graph()), idx_(idx), opts_(opts), map_(p.node_count(), kNoNode),
        used_(idx.graph().node_count(), 0), pos_(p.edge_count()) {}

  // Enumerates instances whose first edge lies in [from, to).
  void run(std::size_t from, std::size_t to, std::vector<Instance>& out, std::set<std::vector<NodeId>>& seen) {
    out_ = &out;
    seen_ = &seen;
    if (p_.edges.empty()) return;
    const auto& e0 = p_.edges[0];
    for (std::size_t pos = from; pos < to && !full(); ++pos) {
      const auto& e = g_.edges[pos];
      if (g_.labels[e.src] != p_.labels[e0.src] || g_.labels[e.dst] != p_.labels[e0.dst]) continue;
      if ((e0.src == e0.dst) != (e.src == e.dst)) continue;
      bind(e0.src, e.src);
      if (e0.dst != e0.src) bind(e0.dst, e.dst);
      pos_[0] = static_cast<std::uint32_t>(pos);
      extend(1);
      unbind(e0.src);
      if (e0.dst != e0.src) unbind(e0.dst);
    }
  }

 private:
  bool full() const { return opts_.limit && out_->size() >= *opts_.limit; }

  void bind(NodeId p, NodeId d) {
    map_[p] = d;
    used_[d] = 1;
  }
  void unbind(NodeId p) {
    used_[map_[p]] = 0;
    map_[p] = kNoNode;
  }

  bool node_ok(NodeId p, NodeId d) const {
    if (map_[p] != kNoNode) return map_[p] == d;
    return !used_[d] && g_.labels[d] == p_.labels[p];
  }

  void extend(std::size_t i) {
    if (full()) return;
    if (i == p_.edges.size()) {
      emit();
      return;
    }
    const auto& pe = p_.edges[i];
    const std::uint32_t after = pos_[i - 1];
    const Timestamp limitT =
        opts_.window ? g_.edges[pos_[0]].t + *opts_.window : std::numeric_limits<Timestamp>::max();
    const bool bySrc = map_[pe.src] != kNoNode;
    const auto& list = bySrc ? idx_.out(map_[pe.src]) : idx_.in(map_[pe.dst]);
    for (auto it = std::upper_bound(list.begin(), list.end(), after); it != list.end() && !full(); ++it) {
      const auto& e = g_.edges[*it];
      if (e.t > limitT) break;
      if (!node_ok(pe.src, e.src) || !node_ok(pe.dst, e.dst)) continue;
      if (pe.src == pe.dst ? e.src != e.dst : e.src == e.dst) continue;
      const bool newSrc = map_[pe.src] == kNoNode;
      if (newSrc) bind(pe.src, e.src);
      const bool newDst = map_[pe.dst] == kNoNode;
      if (newDst) bind(pe.dst, e.dst);
      pos_[i] = *it;
      extend(i + 1);
      if (newDst) unbind(pe.dst);
      if (newSrc) unbind(pe.src);
    }
  }

  void emit() {
    if (!seen_->insert(map_).second) return;
    Instance inst;
    inst.embedding.nodeMap = map_;
    for (auto pos : pos_) inst.embedding.timeMap.push_back(g_.edges[pos].t);
    inst.start = inst.embedding.timeMap.front();
    inst.end = inst.embedding.timeMap.back();
    out_->push_back(std::move(inst));
  }

  const TemporalPattern& p_;
  const TemporalGraph& g_;
  const MatchIndex& idx_;
  const MatchOptions& opts_;
  std::vector<NodeId> map_;
  std::vector<char> used_;
  std::vector<std::uint32_t> pos_;
  std::vector<Instance>* out_ = nullptr;
  std::set<std::vector<NodeId>>* seen_ = nullptr;
};

inline bool instance_before(const Instance& a, const Instance& b) {
  if (a.start != b.start) return a.start < b.start;
  if (a.end != b.end) return a.end < b.end;
  return a.embedding.nodeMap < b.embedding.nodeMap;
}

}  // namespace detail

/// Distinct matches of `p` in the indexed graph, one per node map, ordered by
/// interval. Matches spanning more than `opts.window` are not reported.
inline std::vector<Instance> find_instances(const TemporalPattern& p, const MatchIndex& idx,
                                            const MatchOptions& opts = {}) {
  std::vector<Instance> out;
  std::set<std::vector<NodeId>> seen;
  detail::InstanceSearch search(p, idx, opts);
  const std::size_t m = idx.graph().edges.size();
  const std::size_t shard = std::max<std::size_t>(1, opts.shardSize);
  for (std::size_t from = 0; from < m; from += shard) search.run(from, std::min(m, from + shard), out, seen);
  std::sort(out.begin(), out.end(), detail::instance_before);
  return out;
}

inline std::vector<Instance> find_instances(const TemporalPattern& p, const TemporalGraph& g,
                                            const MatchOptions& opts = {}) {
  MatchIndex idx(g);
  return find_instances(p, idx, opts);
}

/// Instances of any of the queries (OR-combined), duplicates across queries
/// with the same node image and interval removed.
inline std::vector<Instance> find_instances_any(std::span<const TemporalPattern> queries, const TemporalGraph& g,
                                                const MatchOptions& opts = {}) {
  MatchIndex idx(g);
  std::vector<Instance> all;
  std::set<std::tuple<Timestamp, Timestamp, std::vector<NodeId>>> seen;
  for (const auto& q : queries) {
    for (auto& inst : find_instances(q, idx, opts)) {
      auto image = inst.embedding.nodeMap;
      std::sort(image.begin(), image.end());
      if (seen.emplace(inst.start, inst.end, std::move(image)).second) all.push_back(std::move(inst));
    }
  }
  std::sort(all.begin(), all.end(), detail::instance_before);
  return all;
}

struct BehaviorAccuracy {
  std::string behavior;
  std::size_t identified = 0;
  std::size_t correct = 0;
  std::size_t truthTotal = 0;
  std::size_t discovered = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct Evaluation {
  std::vector<BehaviorAccuracy> perBehavior;
  double macroPrecision = 0.0;
  double macroRecall = 0.0;
};

struct Interval {
  Timestamp start = 0;
  Timestamp end = 0;
};

/// An instance is correct when its interval lies inside a truth interval of
/// its behavior; a truth instance is discovered when a correct instance lies
/// inside it. With no identified instances precision is 1 if the behavior has
/// no truth instances and 0 otherwise; recall over no truth instances is 1.
inline Evaluation evaluate(const std::map<std::string, std::vector<Interval>>& identified, const GroundTruth& truth) {
  std::map<std::string, std::vector<Interval>> truthBy;
  for (const auto& t : truth) truthBy[t.behavior].push_back({t.start, t.end});
  std::set<std::string> names;
  for (const auto& [k, v] : identified) names.insert(k);
  for (const auto& [k, v] : truthBy) names.insert(k);

  Evaluation ev;
  for (const auto& name : names) {
    BehaviorAccuracy acc;
    acc.behavior = name;
    static const std::vector<Interval> none;
    auto it = identified.find(name);
    const auto& found = it == identified.end() ? none : it->second;
    auto tt = truthBy.find(name);
    const auto& truthList = tt == truthBy.end() ? none : tt->second;
    acc.identified = found.size();
    acc.truthTotal = truthList.size();
    std::vector<char> discovered(truthList.size(), 0);
    for (const auto& f : found) {
      bool ok = false;
      for (std::size_t i = 0; i < truthList.size(); ++i)
        if (truthList[i].start <= f.start && f.end <= truthList[i].end) {
          ok = true;
          discovered[i] = 1;
        }
      if (ok) ++acc.correct;
    }
    acc.discovered = static_cast<std::size_t>(std::count(discovered.begin(), discovered.end(), 1));
    if (acc.identified == 0)
      acc.precision = acc.truthTotal == 0 ? 1.0 : 0.0;
    else
      acc.precision = static_cast<double>(acc.correct) / static_cast<double>(acc.identified);
    acc.recall = acc.truthTotal == 0 ? 1.0 : static_cast<double>(acc.discovered) / static_cast<double>(acc.truthTotal);
    ev.perBehavior.push_back(acc);
  }
  if (!ev.perBehavior.empty()) {
    for (const auto& a : ev.perBehavior) {
      ev.macroPrecision += a.precision;
      ev.macroRecall += a.recall;
    }
    ev.macroPrecision /= static_cast<double>(ev.perBehavior.size());
    ev.macroRecall /= static_cast<double>(ev.perBehavior.size());
  }
  return ev;
}

inline std::vector<Interval> intervals_of(const std::vector<Instance>& instances) {
  std::vector<Interval> out;
  out.reserve(instances.size());
  for (const auto& i : instances) out.push_back({i.start, i.end});
  return out;
}

/// Ground-truth text: lines `behavior <name> <start> <end>`, `#` comments.
inline GroundTruth parse_ground_truth(std::istream& in) {
  GroundTruth truth;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    TruthInterval t;
    std::string extra;
    if (kw != "behavior" || !(ls >> t.behavior >> t.start >> t.end) || (ls >> extra))
      throw Error(ErrorCode::ParseError, "truth line " + std::to_string(lineNo) + ": expected 'behavior <name> <start> <end>'");
    if (t.start > t.end)
      throw Error(ErrorCode::ParseError, "truth line " + std::to_string(lineNo) + ": start after end");
    truth.push_back(std::move(t));
  }
  return truth;
}

inline GroundTruth load_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open truth file '" + path + "'");
  return parse_ground_truth(in);
}

inline void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  for (const auto& t : truth) out << "behavior " << t.behavior << ' ' << t.start << ' ' << t.end << '\n';
}

}  // namespace tgminer
