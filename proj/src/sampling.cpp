#include "aurc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "aurc/error.hpp"
#include "aurc/random.hpp"
#include "json.hpp"

namespace aurc {
namespace {

// rank[i] = 1 + #{j : score[j] > score[i]}
std::vector<std::size_t> competition_ranks(const std::vector<double>& scores) {
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<std::size_t> ranks(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), scores[i],
                                        std::greater<>());
    ranks[i] = static_cast<std::size_t>(first - sorted.begin()) + 1;
  }
  return ranks;
}

}  // namespace

std::vector<ScoredCandidate> filter_candidates(std::vector<ScoredCandidate> candidates) {
  std::erase_if(candidates, [](const ScoredCandidate& c) {
    return c.tokens.size() < kMinSentenceTokens || c.tokens.size() > kMaxSentenceTokens ||
           !(c.arg_score >= kMinArgScore);
  });
  return candidates;
}

std::vector<RankedCandidate> rank_aggregate(const std::vector<ScoredCandidate>& group) {
  if (group.empty()) return {};
  std::vector<double> doc;
  std::vector<double> arg;
  std::vector<double> stance;
  for (const auto& c : group) {
    if (c.topic != group.front().topic || c.stance != group.front().stance) {
      throw ValidationError("rank_aggregate: candidate '" + c.sentence_id +
                            "' is outside the group's topic/stance");
    }
    if (!std::isfinite(c.doc_score) || !std::isfinite(c.arg_score) ||
        !std::isfinite(c.stance_score)) {
      throw ValidationError("rank_aggregate: candidate '" + c.sentence_id +
                            "' has a non-finite score");
    }
    doc.push_back(c.doc_score);
    arg.push_back(c.arg_score);
    stance.push_back(c.stance_score);
  }
  const auto d = competition_ranks(doc);
  const auto a = competition_ranks(arg);
  const auto s = competition_ranks(stance);

  std::vector<RankedCandidate> out;
  out.reserve(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    out.push_back({group[i], d[i], a[i], s[i], d[i] + a[i] + s[i]});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.agg != y.agg) return x.agg < y.agg;
    return x.candidate.sentence_id < y.candidate.sentence_id;
  });
  return out;
}

std::vector<RankedCandidate> probabilistic_select(const std::vector<RankedCandidate>& ranked,
                                                  std::size_t n, double p,
                                                  std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ValidationError("probabilistic_select: p must be in (0, 1]");
  }
  const std::size_t target = std::min(n, ranked.size());
  std::vector<bool> taken(ranked.size(), false);
  std::vector<RankedCandidate> out;
  out.reserve(target);
  Rng rng(seed);
  while (out.size() < target) {
    for (std::size_t i = 0; i < ranked.size() && out.size() < target; ++i) {
      if (taken[i]) continue;
      if (rng.uniform01() < p) {
        taken[i] = true;
        out.push_back(ranked[i]);
      }
    }
  }
  return out;
}

std::uint64_t group_seed(std::uint64_t master, const Topic& topic, StanceLabel stance) {
  return derive_seed(master, topic.id + "|" + std::string(to_string(stance)));
}

SamplingResult run_sampling(const std::vector<ScoredCandidate>& candidates,
                            const SamplingOptions& options) {
  using Key = std::pair<std::string, StanceLabel>;
  std::map<Key, std::vector<ScoredCandidate>> raw;
  for (const auto& c : candidates) {
    if (!options.topic_id.empty() && c.topic.id != options.topic_id) continue;
    raw[{c.topic.id, c.stance}].push_back(c);
  }

  SamplingResult result;
  for (auto& [key, group] : raw) {
    GroupSummary summary;
    summary.topic = group.front().topic;
    summary.stance = key.second;
    summary.candidates = group.size();
    const auto eligible = filter_candidates(std::move(group));
    summary.eligible = eligible.size();
    summary.seed = group_seed(options.seed, summary.topic, summary.stance);
    const auto picked = probabilistic_select(rank_aggregate(eligible), options.n,
                                             options.p, summary.seed);
    summary.selected = picked.size();
    result.selected.insert(result.selected.end(), picked.begin(), picked.end());
    result.groups.push_back(summary);
  }
  return result;
}

std::vector<ScoredCandidate> read_candidates_jsonl(std::istream& in,
                                                   const std::string& source) {
  std::vector<ScoredCandidate> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = source + ":" + std::to_string(lineno) + ": ";
    ScoredCandidate c;
    try {
      const auto obj = nlohmann::json::parse(line);
      const auto topic_id = obj.at("topic_id").get<std::string>();
      const Topic* t = find_topic_by_id(topic_id);
      if (t == nullptr) throw ValidationError(where + "unknown topic '" + topic_id + "'");
      c.topic = *t;
      c.sentence_id = obj.at("sentence_id").get<std::string>();
      c.tokens = obj.at("tokens").get<std::vector<std::string>>();
      c.doc_score = obj.at("doc_score").get<double>();
      c.arg_score = obj.at("arg_score").get<double>();
      c.stance_score = obj.at("stance_score").get<double>();
      const auto stance = parse_label(obj.at("stance").get<std::string>());
      if (!stance || !is_argumentative(*stance)) {
        throw ValidationError(where + "stance must be PRO or CON");
      }
      c.stance = *stance;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + "malformed candidate: " + e.what());
    }
    out.push_back(std::move(c));
  }
  return out;
}

void write_selection_jsonl(const SamplingResult& result, std::ostream& out) {
  for (const auto& r : result.selected) {
    nlohmann::ordered_json obj;
    obj["sentence_id"] = r.candidate.sentence_id;
    obj["topic_id"] = r.candidate.topic.id;
    obj["topic_name"] = r.candidate.topic.name;
    obj["stance"] = std::string(to_string(r.candidate.stance));
    obj["tokens"] = r.candidate.tokens;
    obj["doc_rank"] = r.doc_rank;
    obj["arg_rank"] = r.arg_rank;
    obj["stance_rank"] = r.stance_rank;
    obj["agg"] = r.agg;
    out << obj.dump() << '\n';
  }
}

}  // namespace aurc
