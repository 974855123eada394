#include "aurc/aggregate.hpp"

#include <array>
#include <istream>
#include <unordered_map>

#include "aurc/error.hpp"
#include "json.hpp"

namespace aurc {
namespace {

StanceLabel vote_winner(const std::array<std::size_t, kNumLabels>& counts) {
  std::size_t best = 0;
  std::size_t n_best = 0;
  StanceLabel winner = StanceLabel::Non;
  for (auto l : kAllLabels) {
    const auto c = counts[index_of(l)];
    if (c > best) {
      best = c;
      n_best = 1;
      winner = l;
    } else if (c == best) {
      ++n_best;
    }
  }
  return n_best == 1 ? winner : StanceLabel::Non;
}

// Calls fn(indices) for every size-k subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

void validate_annotation_set(const AnnotationSet& set) {
  if (set.annotations.empty()) {
    throw ValidationError("sentence '" + set.sentence_id + "' has no annotators");
  }
  const auto n = set.annotations.begin()->second.size();
  if (n == 0) {
    throw ValidationError("sentence '" + set.sentence_id + "' has empty annotations");
  }
  for (const auto& [who, labels] : set.annotations) {
    if (labels.size() != n) {
      throw ValidationError("sentence '" + set.sentence_id + "': annotator '" +
                            who + "' has " + std::to_string(labels.size()) +
                            " labels, expected " + std::to_string(n));
    }
  }
}

Labels majority_vote(const std::vector<const Labels*>& votes) {
  if (votes.empty()) throw ValidationError("majority_vote: no annotators");
  const auto n = votes.front()->size();
  for (const auto* v : votes) {
    if (v->size() != n) throw ValidationError("majority_vote: length mismatch");
  }
  Labels out(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::array<std::size_t, kNumLabels> counts{};
    for (const auto* v : votes) ++counts[index_of((*v)[t])];
    out[t] = vote_winner(counts);
  }
  return out;
}

Labels majority_vote(const AnnotationSet& set) {
  validate_annotation_set(set);
  std::vector<const Labels*> votes;
  for (const auto& [who, labels] : set.annotations) votes.push_back(&labels);
  return majority_vote(votes);
}

Labels aggregate_gold(const AnnotationSet& set) {
  const auto voted = majority_vote(set);
  // Round trip through the segment view so the result is maximal-run canonical.
  return segments_to_labels(labels_to_segments(voted), voted.size());
}

double overlap_curve(const std::vector<Labels>& reference,
                     const std::vector<AnnotationSet>& sets, std::size_t k) {
  if (reference.size() != sets.size()) {
    throw ValidationError("overlap_curve: reference covers " +
                          std::to_string(reference.size()) + " sentences, " +
                          std::to_string(sets.size()) + " annotation sets");
  }
  if (k == 0) throw ValidationError("overlap_curve: k must be at least 1");
  std::size_t agree = 0;
  std::size_t total = 0;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    validate_annotation_set(sets[s]);
    std::vector<const Labels*> all;
    for (const auto& [who, labels] : sets[s].annotations) all.push_back(&labels);
    if (k > all.size()) {
      throw ValidationError("overlap_curve: k=" + std::to_string(k) +
                            " exceeds the " + std::to_string(all.size()) +
                            " annotators of sentence '" + sets[s].sentence_id + "'");
    }
    if (reference[s].size() != all.front()->size()) {
      throw ValidationError("overlap_curve: reference length mismatch for '" +
                            sets[s].sentence_id + "'");
    }
    for_each_subset(all.size(), k, [&](const std::vector<std::size_t>& idx) {
      std::vector<const Labels*> subset;
      subset.reserve(idx.size());
      for (auto i : idx) subset.push_back(all[i]);
      const auto voted = majority_vote(subset);
      for (std::size_t t = 0; t < voted.size(); ++t) {
        agree += voted[t] == reference[s][t];
      }
      total += voted.size();
    });
  }
  if (total == 0) throw ValidationError("overlap_curve: no tokens");
  return 100.0 * static_cast<double>(agree) / static_cast<double>(total);
}

std::vector<AnnotationRecord> read_annotations_jsonl(std::istream& in,
                                                     const std::string& source) {
  std::vector<AnnotationRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = source + ":" + std::to_string(lineno) + ": ";
    AnnotationRecord rec;
    try {
      const auto obj = nlohmann::json::parse(line);
      rec.sentence_id = obj.at("sentence_id").get<std::string>();
      rec.annotator_id = obj.at("annotator_id").get<std::string>();
      for (const auto& v : obj.at("labels")) {
        auto l = parse_label(v.get<std::string>());
        if (!l) {
          throw ValidationError(where + "unknown label '" + v.get<std::string>() + "'");
        }
        rec.labels.push_back(*l);
      }
      if (obj.contains("tokens")) {
        rec.tokens = obj["tokens"].get<std::vector<std::string>>();
      }
      if (obj.contains("topic_id")) rec.topic_id = obj["topic_id"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + "malformed annotation record: " + e.what());
    }
    if (rec.labels.empty()) throw ValidationError(where + "empty labels");
    if (!rec.tokens.empty() && rec.tokens.size() != rec.labels.size()) {
      throw ValidationError(where + "tokens/labels length mismatch");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AnnotationSet> group_annotations(
    const std::vector<AnnotationRecord>& records) {
  std::vector<AnnotationSet> out;
  std::unordered_map<std::string, std::size_t> where;
  for (const auto& r : records) {
    auto [it, fresh] = where.emplace(r.sentence_id, out.size());
    if (fresh) out.push_back({r.sentence_id, {}});
    auto& set = out[it->second];
    if (!set.annotations.emplace(r.annotator_id, r.labels).second) {
      throw ValidationError("annotator '" + r.annotator_id +
                            "' labeled sentence '" + r.sentence_id + "' twice");
    }
  }
  for (const auto& set : out) validate_annotation_set(set);
  return out;
}

Corpus aggregate_corpus(const std::vector<AnnotationRecord>& records,
                        const Corpus& sentences,
                        const GoldAggregator& aggregator) {
  std::unordered_map<std::string, const LabeledSentence*> by_id;
  for (const auto& s : sentences) by_id.emplace(s.sentence_id, &s);
  std::unordered_map<std::string, const AnnotationRecord*> first;
  for (const auto& r : records) first.emplace(r.sentence_id, &r);

  Corpus out;
  for (const auto& set : group_annotations(records)) {
    LabeledSentence s;
    s.sentence_id = set.sentence_id;
    const auto* rec = first.at(set.sentence_id);
    const auto known = by_id.find(set.sentence_id);
    if (!rec->tokens.empty() && !rec->topic_id.empty()) {
      s.tokens = rec->tokens;
      const Topic* t = find_topic_by_id(rec->topic_id);
      if (t == nullptr) {
        throw ValidationError("sentence '" + s.sentence_id +
                              "': unknown topic '" + rec->topic_id + "'");
      }
      s.topic = *t;
    } else if (known != by_id.end()) {
      s.tokens = known->second->tokens;
      s.topic = known->second->topic;
      s.split_in_domain = known->second->split_in_domain;
      s.split_cross_domain = known->second->split_cross_domain;
    } else {
      throw ValidationError("sentence '" + s.sentence_id +
                            "': no tokens/topic in annotations or sentence file");
    }
    s.labels = aggregator(set);
    validate_sentence(s);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace aurc
