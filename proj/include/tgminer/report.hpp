#pragma once

// JSON documents: mining reports, instance lists and synthetic specs.
// Requires nlohmann/json (single header "json.hpp" on the include path).

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tgminer/datakit.hpp"
#include "tgminer/matcher.hpp"
#include "tgminer/miner.hpp"

namespace tgminer {

using Json = nlohmann::ordered_json;

inline Json pattern_to_json(const TemporalPattern& p) {
  Json edges = Json::array();
  for (const auto& e : p.edges)
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"t", e.t}, {"srcLabel", p.labels[e.src].text()},
                     {"dstLabel", p.labels[e.dst].text()}});
  return edges;
}

inline TemporalPattern pattern_from_json(const Json& edges) {
  TemporalGraph g;
  for (const auto& e : edges) {
    const auto s = e.at("src").get<NodeId>();
    const auto d = e.at("dst").get<NodeId>();
    const auto need = std::max(s, d) + 1;
    if (g.labels.size() < need) g.labels.resize(need);
    auto setLabel = [&](NodeId v, const std::string& text) {
      Label l = Label::intern(text);
      if (g.labels[v].valid() && g.labels[v] != l)
        throw Error(ErrorCode::ParseError, "node " + std::to_string(v) + " carries two labels");
      g.labels[v] = l;
    };
    setLabel(s, e.at("srcLabel").get<std::string>());
    setLabel(d, e.at("dstLabel").get<std::string>());
    g.edges.push_back({s, d, e.at("t").get<Timestamp>()});
  }
  for (std::size_t v = 0; v < g.labels.size(); ++v)
    if (!g.labels[v].valid()) throw Error(ErrorCode::ParseError, "node " + std::to_string(v) + " has no edge");
  return canonical_pattern(g);
}

inline Json config_to_json(const MiningConfig& cfg) {
  Json j = {{"maxEdges", cfg.maxEdges},
            {"topK", cfg.topK},
            {"score", to_string(cfg.scoreFn.variant)},
            {"epsilon", cfg.scoreFn.epsilon},
            {"pruning",
             {{"bound", cfg.pruning.naiveBound},
              {"subgraph", cfg.pruning.subgraph},
              {"supergraph", cfg.pruning.supergraph}}},
            {"maxEmbeddings", cfg.embeddingCap},
            {"minFreqP", cfg.minFreqP},
            {"seed", cfg.seed}};
  j["querySize"] = cfg.querySize ? Json(*cfg.querySize) : Json(nullptr);
  return j;
}

inline Json stats_to_json(const MiningStats& s, bool withTime = true) {
  Json j = {{"patternsVisited", s.patternsVisited},
            {"subgraphPruneFires", s.subgraphPruneFires},
            {"supergraphPruneFires", s.supergraphPruneFires},
            {"boundPruneFires", s.boundPruneFires},
            {"subisoTests", s.subisoTests},
            {"residualTests", s.residualTests},
            {"truncatedTables", s.truncatedTables},
            {"registryEntries", s.registryEntries}};
  if (withTime) j["wallTime"] = s.wallTime;
  return j;
}

struct ReportExtras {
  std::string behavior = "behavior";
  Timestamp window = 0;  // longest positive graph duration
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

/// {config, patterns:[{edges, score, freqP, freqN, interest}], stats}.
/// `withTime = false` drops wall time so reports compare byte for byte.
inline Json report_to_json(const MiningResult& r, const MiningConfig& cfg, const ReportExtras& extra,
                           bool withTime = true) {
  Json j;
  j["config"] = config_to_json(cfg);
  j["config"]["behavior"] = extra.behavior;
  j["config"]["window"] = extra.window;
  j["config"]["positives"] = extra.positives;
  j["config"]["negatives"] = extra.negatives;
  j["config"]["negativeEmbeddingPolicy"] = "built only for extensions present in positives, capped per graph";
  Json pats = Json::array();
  for (const auto& p : r.rankedPatterns)
    pats.push_back({{"edges", pattern_to_json(p.pattern)},
                    {"score", p.score},
                    {"freqP", p.freqP},
                    {"freqN", p.freqN},
                    {"interest", p.interest}});
  j["patterns"] = std::move(pats);
  j["stats"] = stats_to_json(r.stats, withTime);
  j["stats"]["maximizers"] = r.maximizers.size();
  j["stats"]["bestScore"] = r.rankedPatterns.empty() ? Json(nullptr) : Json(r.bestScore);
  return j;
}

struct LoadedReport {
  std::string behavior = "behavior";
  Timestamp window = 0;
  std::vector<ScoredPattern> patterns;
};

inline LoadedReport report_from_json(const Json& j) {
  LoadedReport r;
  try {
    if (j.contains("config")) {
      const auto& c = j.at("config");
      if (c.contains("behavior")) r.behavior = c.at("behavior").get<std::string>();
      if (c.contains("window")) r.window = c.at("window").get<Timestamp>();
    }
    for (const auto& p : j.at("patterns")) {
      ScoredPattern sp;
      sp.pattern = pattern_from_json(p.at("edges"));
      sp.score = p.value("score", 0.0);
      sp.freqP = p.value("freqP", 0.0);
      sp.freqN = p.value("freqN", 0.0);
      sp.interest = p.value("interest", 0.0);
      sp.text = pattern_text(sp.pattern);
      r.patterns.push_back(std::move(sp));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
  return r;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline Json instances_to_json(const std::string& behavior, const std::string& graph,
                              const std::vector<Instance>& instances) {
  Json list = Json::array();
  for (const auto& i : instances)
    list.push_back({{"start", i.start}, {"end", i.end}, {"nodes", i.embedding.nodeMap}, {"times", i.embedding.timeMap}});
  return {{"behavior", behavior}, {"graph", graph}, {"instances", std::move(list)}};
}

/// Reads one instance document, or an array of them, into intervals per behavior.
inline std::map<std::string, std::vector<Interval>> intervals_from_json(const Json& j) {
  std::map<std::string, std::vector<Interval>> out;
  auto one = [&](const Json& doc) {
    auto& list = out[doc.at("behavior").get<std::string>()];
    for (const auto& i : doc.at("instances")) list.push_back({i.at("start").get<Timestamp>(), i.at("end").get<Timestamp>()});
  };
  try {
    if (j.is_array())
      for (const auto& d : j) one(d);
    else
      one(j);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("instances: ") + e.what());
  }
  return out;
}

inline Json evaluation_to_json(const Evaluation& ev) {
  Json per = Json::array();
  for (const auto& a : ev.perBehavior)
    per.push_back({{"behavior", a.behavior},
                   {"identified", a.identified},
                   {"correct", a.correct},
                   {"truth", a.truthTotal},
                   {"discovered", a.discovered},
                   {"precision", a.precision},
                   {"recall", a.recall},
                   {"precisionConvention", a.identified == 0 ? "no identified instances" : "ratio"}});
  return {{"behaviors", std::move(per)}, {"macroPrecision", ev.macroPrecision}, {"macroRecall", ev.macroRecall}};
}

/// Synthetic spec file: {"preset": "medium", ...overrides}.
inline SyntheticSpec spec_from_json(const Json& j) {
  try {
    SyntheticSpec s = preset(j.value("preset", std::string("medium")));
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("nPositive", s.nPositive);
    get("nNegative", s.nNegative);
    get("backgroundNodes", s.backgroundNodes);
    get("backgroundEdges", s.backgroundEdges);
    get("alphabet", s.alphabet);
    get("zipf", s.zipf);
    get("plantedEdges", s.plantedEdges);
    get("plantedLabels", s.plantedLabels);
    get("plantRate", s.plantRate);
    get("testEpisodes", s.testEpisodes);
    get("testPlantRate", s.testPlantRate);
    get("behavior", s.behavior);
    get("seed", s.seed);
    for (const auto& [key, value] : j.items()) {
      static const std::vector<std::string> known = {"preset", "nPositive", "nNegative", "backgroundNodes",
                                                     "backgroundEdges", "alphabet", "zipf", "plantedEdges",
                                                     "plantedLabels", "plantRate", "testEpisodes",
                                                     "testPlantRate", "behavior", "seed"};
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw Error(ErrorCode::SpecInvalid, "unknown spec field '" + key + "'");
    }
    check_spec(s);
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SpecInvalid, e.what());
  }
}

}  // namespace tgminer
