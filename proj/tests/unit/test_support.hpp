#pragma once

// Generators shared by the unit and acceptance suites.

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "aurc/aggregate.hpp"
#include "aurc/corpus.hpp"
#include "aurc/labels.hpp"
#include "aurc/random.hpp"
#include "aurc/tagger.hpp"

namespace aurc::testing {

inline StanceLabel random_label(Rng& rng) { return kAllLabels[rng.below(kNumLabels)]; }

// Labels with runs, so that segments of several tokens are common.
inline Labels random_labels(Rng& rng, std::size_t n) {
  Labels out;
  while (out.size() < n) {
    const auto l = random_label(rng);
    const auto run = 1 + rng.below(5);
    for (std::size_t i = 0; i < run && out.size() < n; ++i) out.push_back(l);
  }
  return out;
}

inline std::vector<Segment> random_segments(Rng& rng, std::size_t length) {
  std::vector<Segment> out;
  std::size_t pos = rng.below(3);
  while (pos < length) {
    const auto len = 1 + rng.below(8);
    const auto end = std::min(length, pos + len);
    out.push_back({rng.below(2) == 0 ? StanceLabel::Pro : StanceLabel::Con, pos, end});
    pos = end + rng.below(4);
  }
  return out;
}

inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> kWords = {
      "the", "a", "of", "and", "to", "in", "is", "that", "it", "for", "on", "with",
      "as", "was", "by", "people", "many", "some", "state", "law", "year", "report"};
  return kWords;
}

// Cue words make stance learnable: PRO spans start with "benefits", CON
// spans with "harms", and both end with "indeed".
inline LabeledSentence synthetic_sentence(Rng& rng, const Topic& topic, std::size_t index) {
  LabeledSentence s;
  s.sentence_id = topic.id + "-" + std::to_string(index);
  s.topic = topic;
  const auto& words = filler_words();
  const auto n = 6 + rng.below(15);
  s.tokens.resize(n);
  s.labels.assign(n, StanceLabel::Non);
  for (auto& t : s.tokens) t = words[rng.below(words.size())];
  const auto kind = rng.below(4);  // 0,1: NON only; 2: PRO span; 3: CON span
  if (kind >= 2 && n >= 6) {
    const auto start = rng.below(n - 4);
    const auto end = start + 3 + rng.below(n - start - 3 + 1);
    const auto label = kind == 2 ? StanceLabel::Pro : StanceLabel::Con;
    s.tokens[start] = kind == 2 ? "benefits" : "harms";
    s.tokens[end - 1] = "indeed";
    for (auto i = start; i < end; ++i) s.labels[i] = label;
  }
  return s;
}

inline Corpus synthetic_corpus(std::size_t per_topic, std::uint64_t seed) {
  Rng rng(seed);
  Corpus out;
  for (const auto& topic : known_topics()) {
    for (std::size_t i = 0; i < per_topic; ++i) out.push_back(synthetic_sentence(rng, topic, i));
  }
  return out;
}

inline AnnotationSet random_annotation_set(Rng& rng, const std::string& id,
                                           std::size_t annotators, std::size_t length) {
  AnnotationSet set;
  set.sentence_id = id;
  for (std::size_t a = 0; a < annotators; ++a) {
    set.annotations["w" + std::to_string(a)] = random_labels(rng, length);
  }
  return set;
}

// Brute-force alpha: ordered value pairs inside each unit for the observed
// disagreement, ordered pairs of all pooled values for the expected one.
inline double alpha_oracle(const std::vector<AnnotationSet>& sets) {
  std::vector<int> pooled;
  double observed = 0.0;
  for (const auto& set : sets) {
    if (set.annotations.size() < 2) continue;
    const auto len = set.annotations.begin()->second.size();
    for (std::size_t t = 0; t < len; ++t) {
      std::vector<int> values;
      for (const auto& [who, l] : set.annotations) values.push_back(static_cast<int>(l[t]));
      const double m = static_cast<double>(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = 0; j < values.size(); ++j) {
          if (i != j && values[i] != values[j]) observed += 1.0 / (m - 1.0);
        }
      }
      pooled.insert(pooled.end(), values.begin(), values.end());
    }
  }
  const double n = static_cast<double>(pooled.size());
  double expected = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = 0; j < pooled.size(); ++j) {
      if (i != j && pooled[i] != pooled[j]) expected += 1.0;
    }
  }
  return 1.0 - (observed / n) / (expected / (n * (n - 1.0)));
}

// True when alpha is undefined: no pairable values or only one category.
inline bool alpha_undefined(const std::vector<AnnotationSet>& sets) {
  std::array<bool, 3> seen{};
  bool pairable = false;
  for (const auto& s : sets) {
    if (s.annotations.size() < 2) continue;
    pairable = true;
    for (const auto& [w, l] : s.annotations) {
      for (auto x : l) seen[index_of(x)] = true;
    }
  }
  return !pairable || seen[0] + seen[1] + seen[2] < 2;
}

// Enumerates all 3^n sequences in lexicographic order, keeping the first best.
inline Labels brute_force_decode(const EmissionScores& e, const LabelMatrix& trans,
                                 const LabelVector& start, const LabelVector& end,
                                 double* best_score = nullptr) {
  const auto n = e.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= kNumLabels;
  Labels best;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < total; ++code) {
    Labels seq(n);
    auto c = code;
    for (std::size_t i = n; i-- > 0;) {
      seq[i] = kAllLabels[c % kNumLabels];
      c /= kNumLabels;
    }
    const double v = sequence_score(e, trans, start, end, seq);
    if (v > best_v) {
      best_v = v;
      best = seq;
    }
  }
  if (best_score) *best_score = best_v;
  return best;
}

}  // namespace aurc::testing
