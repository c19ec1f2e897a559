// tgminer command line: gen, mine, match, eval, stats, verify.
// Exit codes: 0 ok, 1 usage, 2 data error.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tgminer/oracle.hpp"
#include "tgminer/report.hpp"
#include "tgminer/tgminer.hpp"

namespace fs = std::filesystem;
using namespace tgminer;

namespace {

// Graphs of the requested role, or every graph when the file has none.
std::vector<TemporalGraph> graphs_of(const Dataset& ds, GraphRole role) {
  const auto& pick = role == GraphRole::Positive ? ds.positives : role == GraphRole::Negative ? ds.negatives : ds.tests;
  if (!pick.empty()) return pick;
  std::vector<TemporalGraph> all = ds.positives;
  all.insert(all.end(), ds.negatives.begin(), ds.negatives.end());
  all.insert(all.end(), ds.tests.begin(), ds.tests.end());
  return all;
}

struct GenArgs {
  std::string spec, preset, out;
  std::optional<std::uint64_t> seed;
  std::size_t replicate = 1;
};

int run_gen(const GenArgs& a) {
  SyntheticSpec spec = a.spec.empty() ? preset(a.preset.empty() ? "medium" : a.preset) : spec_from_json(read_json_file(a.spec));
  if (a.seed) spec.seed = *a.seed;
  auto corpus = generate_synthetic(spec);
  auto data = replicate(corpus.data, a.replicate);
  fs::create_directories(a.out);
  save_dataset((fs::path(a.out) / "positives.tg").string(), {data.positives, {}, {}});
  save_dataset((fs::path(a.out) / "negatives.tg").string(), {{}, data.negatives, {}});
  save_dataset((fs::path(a.out) / "test.tg").string(), {{}, {}, data.tests});
  std::ofstream truth(fs::path(a.out) / "truth.txt");
  write_ground_truth(truth, corpus.truth);
  write_json_file((fs::path(a.out) / "planted.json").string(),
                  {{"behavior", spec.behavior}, {"edges", pattern_to_json(corpus.planted)}});
  std::cout << "wrote " << data.positives.size() << " positive, " << data.negatives.size() << " negative, "
            << data.tests.size() << " test graph(s) and " << corpus.truth.size() << " truth intervals to " << a.out
            << '\n';
  return 0;
}

struct MineArgs {
  std::string pos, neg, out, score = "logratio", blacklist, behavior = "behavior", ties = "reject";
  std::size_t maxEdges = 6, topK = 5, maxEmbeddings = kDefaultEmbeddingCap, querySize = 0;
  double epsilon = 1e-6, minFreqP = 0.0;
  bool noSub = false, noSup = false, noBound = false, noTime = false;
};

int run_mine(const MineArgs& a) {
  LoadOptions lo;
  lo.ties = parse_tie_policy(a.ties);
  auto pos = graphs_of(load_dataset(a.pos, lo), GraphRole::Positive);
  auto neg = graphs_of(load_dataset(a.neg, lo), GraphRole::Negative);
  MiningConfig cfg;
  cfg.maxEdges = a.maxEdges;
  cfg.topK = a.topK;
  cfg.scoreFn.variant = parse_score_variant(a.score);
  cfg.scoreFn.epsilon = a.epsilon;
  cfg.pruning = {!a.noBound, !a.noSub, !a.noSup};
  cfg.embeddingCap = a.maxEmbeddings;
  cfg.minFreqP = a.minFreqP;
  if (a.querySize) cfg.querySize = a.querySize;
  std::vector<TemporalGraph> training = pos;
  training.insert(training.end(), neg.begin(), neg.end());
  auto model = InterestModel::from_graphs(training);
  if (!a.blacklist.empty()) model.load_blacklist(a.blacklist);
  auto result = mine(pos, neg, cfg, &model);
  ReportExtras extra{a.behavior, longest_duration(pos), pos.size(), neg.size()};
  auto report = report_to_json(result, cfg, extra, !a.noTime);
  if (a.out.empty())
    std::cout << report.dump(2) << '\n';
  else
    write_json_file(a.out, report);
  std::cerr << "visited " << result.stats.patternsVisited << " patterns in " << result.stats.wallTime
            << " s; best score " << result.bestScore << '\n';
  return 0;
}

struct MatchArgs {
  std::string queries, graph, out;
  std::optional<Timestamp> window;
  std::optional<std::size_t> limit;
  bool noWindow = false;
};

int run_match(const MatchArgs& a) {
  auto rep = report_from_json(read_json_file(a.queries));
  auto graphs = graphs_of(load_dataset(a.graph), GraphRole::Test);
  MatchOptions mo;
  mo.limit = a.limit;
  if (a.window) mo.window = *a.window;
  else if (!a.noWindow && rep.window > 0) mo.window = rep.window;
  std::vector<TemporalPattern> qs;
  for (const auto& p : rep.patterns) qs.push_back(p.pattern);
  Json docs = Json::array();
  std::size_t total = 0;
  for (const auto& g : graphs) {
    auto inst = find_instances_any(qs, g, mo);
    total += inst.size();
    docs.push_back(instances_to_json(rep.behavior, g.id, inst));
  }
  Json out = docs.size() == 1 ? docs.front() : docs;
  if (a.out.empty())
    std::cout << out.dump(2) << '\n';
  else
    write_json_file(a.out, out);
  std::cerr << total << " instance(s) of " << qs.size() << " quer" << (qs.size() == 1 ? "y" : "ies") << '\n';
  return 0;
}

int run_eval(const std::string& instances, const std::string& truthPath, const std::string& out) {
  auto ev = evaluate(intervals_from_json(read_json_file(instances)), load_ground_truth(truthPath));
  auto j = evaluation_to_json(ev);
  if (out.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(out, j);
  return 0;
}

int run_stats(const std::string& in, const std::string& ties) {
  LoadOptions lo;
  lo.ties = parse_tie_policy(ties);
  auto ds = load_dataset(in, lo);
  auto line = [](const char* name, const std::vector<TemporalGraph>& gs) {
    auto s = dataset_stats(gs);
    std::cout << name << ": graphs=" << s.graphs << " nodes=" << s.nodes << " edges=" << s.edges
              << " labels=" << s.labels << " avgNodes=" << s.avgNodes << " avgEdges=" << s.avgEdges << '\n';
  };
  line("positive", ds.positives);
  line("negative", ds.negatives);
  line("test", ds.tests);
  return 0;
}

// Recomputes each reported pattern's frequencies with the brute-force
// oracle; with --best also checks the best score by exhaustive search.
int run_verify(const std::string& reportPath, const std::string& posPath, const std::string& negPath, bool best,
               std::size_t maxEdges) {
  auto j = read_json_file(reportPath);
  auto rep = report_from_json(j);
  auto pos = graphs_of(load_dataset(posPath), GraphRole::Positive);
  auto neg = graphs_of(load_dataset(negPath), GraphRole::Negative);
  bool ok = true;
  for (const auto& p : rep.patterns) {
    const double x = static_cast<double>(oracle_support(p.pattern, pos)) / static_cast<double>(pos.size());
    const double y = static_cast<double>(oracle_support(p.pattern, neg)) / static_cast<double>(neg.size());
    const bool same = std::abs(x - p.freqP) < 1e-12 && std::abs(y - p.freqN) < 1e-12;
    ok = ok && same;
    std::cout << (same ? "ok   " : "FAIL ") << p.text << " freqP=" << x << " freqN=" << y << '\n';
  }
  if (best && !rep.patterns.empty()) {
    ScoreFunction fn;
    fn.variant = parse_score_variant(j.at("config").value("score", std::string("logratio")));
    fn.epsilon = j.at("config").value("epsilon", 1e-6);
    const std::size_t k = maxEdges ? maxEdges : j.at("config").value("maxEdges", std::size_t{4});
    auto ob = oracle_best_score(pos, neg, k, fn);
    const bool same = ob.score == rep.patterns.front().score;
    ok = ok && same;
    std::cout << (same ? "ok   " : "FAIL ") << "best score oracle=" << ob.score
              << " report=" << rep.patterns.front().score << '\n';
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discriminative temporal graph pattern mining"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a synthetic corpus with a planted behavior");
  g->add_option("--spec", gen.spec, "synthetic spec JSON");
  g->add_option("--preset", gen.preset, "small, medium or large (when no --spec)");
  g->add_option("--seed", gen.seed, "random seed (overrides the spec)");
  g->add_option("--out", gen.out, "output directory")->required();
  g->add_option("--replicate", gen.replicate, "copies of every graph (SYN-k)")->check(CLI::PositiveNumber);

  MineArgs mn;
  auto* m = app.add_subcommand("mine", "mine discriminative patterns");
  m->add_option("--pos", mn.pos, "positive graphs")->required();
  m->add_option("--neg", mn.neg, "negative graphs")->required();
  m->add_option("--max-edges", mn.maxEdges, "largest pattern size")->check(CLI::PositiveNumber);
  m->add_option("--top-k", mn.topK, "patterns to report")->check(CLI::PositiveNumber);
  m->add_option("--score", mn.score, "logratio, gtest or infogain");
  m->add_option("--epsilon", mn.epsilon, "score smoothing constant");
  m->add_flag("--no-subgraph-prune", mn.noSub);
  m->add_flag("--no-supergraph-prune", mn.noSup);
  m->add_flag("--no-bound-prune", mn.noBound);
  m->add_option("--max-embeddings", mn.maxEmbeddings, "embedding cap per graph")->check(CLI::PositiveNumber);
  m->add_option("--min-freq", mn.minFreqP, "positive support floor");
  m->add_option("--query-size", mn.querySize, "rank only patterns with this many edges");
  m->add_option("--blacklist", mn.blacklist, "labels with zero interest, one per line");
  m->add_option("--behavior", mn.behavior, "behavior name stored in the report");
  m->add_option("--ties", mn.ties, "reject or inputOrder");
  m->add_flag("--no-time", mn.noTime, "omit wall time from the report");
  m->add_option("--out", mn.out, "report JSON");

  MatchArgs ma;
  auto* mt = app.add_subcommand("match", "search a test graph with mined queries");
  mt->add_option("--queries", ma.queries, "report JSON")->required();
  mt->add_option("--graph", ma.graph, "test graph file")->required();
  mt->add_option("--window", ma.window, "largest instance span (default: report window)");
  mt->add_flag("--no-window", ma.noWindow, "do not bound instance spans");
  mt->add_option("--limit", ma.limit, "stop after this many instances per query");
  mt->add_option("--out", ma.out, "instances JSON");

  std::string evInst, evTruth, evOut;
  auto* ev = app.add_subcommand("eval", "precision and recall against ground truth");
  ev->add_option("--instances", evInst)->required();
  ev->add_option("--truth", evTruth)->required();
  ev->add_option("--out", evOut);

  std::string stIn, stTies = "reject";
  auto* st = app.add_subcommand("stats", "dataset statistics");
  st->add_option("--in", stIn)->required();
  st->add_option("--ties", stTies, "reject or inputOrder");

  std::string vReport, vPos, vNeg;
  bool vBest = false;
  std::size_t vMax = 0;
  auto* vf = app.add_subcommand("verify", "check a report against the brute-force oracle (small inputs)");
  vf->add_option("--report", vReport)->required();
  vf->add_option("--pos", vPos)->required();
  vf->add_option("--neg", vNeg)->required();
  vf->add_flag("--best", vBest, "also compare the best score with exhaustive search");
  vf->add_option("--max-edges", vMax, "pattern size for --best (default: report config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*g) return run_gen(gen);
    if (*m) return run_mine(mn);
    if (*mt) return run_match(ma);
    if (*ev) return run_eval(evInst, evTruth, evOut);
    if (*st) return run_stats(stIn, stTies);
    if (*vf) return run_verify(vReport, vPos, vNeg, vBest, vMax);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigInvalid ? 1 : 2;
  }
  return 1;
}
