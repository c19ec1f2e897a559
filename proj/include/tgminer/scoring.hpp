#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tgminer/graph.hpp"

namespace tgminer {

enum class ScoreVariant { LogRatio, GTest, InfoGain };

inline const char* to_string(ScoreVariant v) {
  switch (v) {
    case ScoreVariant::LogRatio: return "logratio";
    case ScoreVariant::GTest: return "gtest";
    case ScoreVariant::InfoGain: return "infogain";
  }
  return "?";
}

/// Case-insensitive.
inline ScoreVariant parse_score_variant(std::string_view text) {
  std::string s(text);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "logratio") return ScoreVariant::LogRatio;
  if (s == "gtest") return ScoreVariant::GTest;
  if (s == "infogain") return ScoreVariant::InfoGain;
  throw Error(ErrorCode::ConfigInvalid, "unknown score function '" + std::string(text) + "'");
}

/// Discriminative score F(x, y) of positive frequency x and negative
/// frequency y; increasing in x and decreasing in y. The class sizes are
/// needed by the G-test and information-gain variants only.
struct ScoreFunction {
  ScoreVariant variant = ScoreVariant::LogRatio;
  double epsilon = 1e-6;
  double positives = 1.0;
  double negatives = 1.0;

  static ScoreFunction log_ratio(double eps = 1e-6) { return {ScoreVariant::LogRatio, eps}; }
  static ScoreFunction g_test(double nPos, double nNeg, double eps = 1e-6) {
    return {ScoreVariant::GTest, eps, nPos, nNeg};
  }
  static ScoreFunction info_gain(double nPos, double nNeg, double eps = 1e-6) {
    return {ScoreVariant::InfoGain, eps, nPos, nNeg};
  }
};

namespace detail {

inline double xlogy_ratio(double a, double b) { return a <= 0.0 ? 0.0 : a * std::log(a / b); }

inline double entropy2(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

}  // namespace detail

inline double score(const ScoreFunction& fn, double freqP, double freqN) {
  const double eps = fn.epsilon;
  switch (fn.variant) {
    case ScoreVariant::LogRatio:
      return std::log(std::max(freqP, eps) / (freqN + eps));
    case ScoreVariant::GTest: {
      // Signed so that patterns rarer in positives than negatives score
      // below zero; the unsigned statistic is not monotone in x.
      const double x = std::clamp(freqP, 0.0, 1.0);
      const double y = std::clamp(freqN, eps, 1.0 - eps);
      const double g = 2.0 * fn.positives * (detail::xlogy_ratio(x, y) + detail::xlogy_ratio(1.0 - x, 1.0 - y));
      return x >= y ? g : -g;
    }
    case ScoreVariant::InfoGain: {
      // Laplace-smoothed occurrence rates per class, then mutual information
      // between class and occurrence; signed like the G-test.
      const double np = fn.positives, nn = fn.negatives;
      const double px = (freqP * np + 1.0) / (np + 2.0);
      const double py = (freqN * nn + 1.0) / (nn + 2.0);
      const double prior = np / (np + nn);
      const double occ = prior * px + (1.0 - prior) * py;
      const double hClass = detail::entropy2(prior);
      double hCond = 0.0;
      if (occ > 0.0) hCond += occ * detail::entropy2(prior * px / occ);
      if (occ < 1.0) hCond += (1.0 - occ) * detail::entropy2(prior * (1.0 - px) / (1.0 - occ));
      const double ig = std::max(0.0, hClass - hCond);
      return px >= py ? ig : -ig;
    }
  }
  return 0.0;
}

/// Best score any temporal supergraph of a pattern with positive frequency
/// freqP could reach.
inline double score_upper_bound(const ScoreFunction& fn, double freqP) { return score(fn, freqP, 0.0); }

/// Interest of a node label: 1 / (number of training graphs containing it),
/// zero when blacklisted, 1 when never seen.
class InterestModel {
 public:
  InterestModel() = default;

  static InterestModel from_graphs(std::span<const TemporalGraph> graphs) {
    InterestModel m;
    for (const auto& g : graphs) {
      std::unordered_set<Label> present(g.labels.begin(), g.labels.end());
      for (Label l : present) ++m.labelFreq_[l];
    }
    return m;
  }

  void set_frequency(Label l, std::size_t graphsContaining) { labelFreq_[l] = graphsContaining; }
  void blacklist(Label l) { blacklist_.insert(l); }
  bool is_blacklisted(Label l) const { return blacklist_.contains(l); }

  std::size_t frequency(Label l) const {
    auto it = labelFreq_.find(l);
    return it == labelFreq_.end() ? 0 : it->second;
  }

  double label_interest(Label l) const {
    if (blacklist_.contains(l)) return 0.0;
    auto f = frequency(l);
    return f == 0 ? 1.0 : 1.0 / static_cast<double>(f);
  }

  /// Blacklist file: one label per line; `#` starts a comment.
  void load_blacklist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open blacklist '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      auto e = line.find_last_not_of(" \t\r");
      blacklist(Label::intern(line.substr(b, e - b + 1)));
    }
  }

 private:
  std::unordered_map<Label, std::size_t> labelFreq_;
  std::unordered_set<Label> blacklist_;
};

inline double interest(const TemporalPattern& p, const InterestModel& model) {
  double s = 0.0;
  for (Label l : p.labels) s += model.label_interest(l);
  return s;
}

struct ScoredPattern {
  TemporalPattern pattern;
  double score = 0.0;
  double freqP = 0.0;
  double freqN = 0.0;
  double interest = 0.0;
  std::string text;  // pattern_text(pattern), the final tie-breaker
};

/// Total order: score desc, interest desc, edge count asc, canonical text asc.
inline bool rank_before(const ScoredPattern& a, const ScoredPattern& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.interest != b.interest) return a.interest > b.interest;
  if (a.pattern.edge_count() != b.pattern.edge_count()) return a.pattern.edge_count() < b.pattern.edge_count();
  return a.text < b.text;
}

inline std::vector<ScoredPattern> rank(std::vector<ScoredPattern> patterns, const InterestModel& model,
                                       std::size_t k = 5) {
  for (auto& p : patterns) {
    p.interest = interest(p.pattern, model);
    if (p.text.empty()) p.text = pattern_text(p.pattern);
  }
  std::sort(patterns.begin(), patterns.end(), rank_before);
  if (patterns.size() > k) patterns.resize(k);
  return patterns;
}

}  // namespace tgminer
