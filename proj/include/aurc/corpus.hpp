#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aurc/labels.hpp"

namespace aurc {

struct Topic {
  std::string id;    // "T1" .. "T8"
  std::string name;  // e.g. "school uniforms"

  friend bool operator==(const Topic&, const Topic&) = default;
};

// The eight benchmark topics in id order.
std::span<const Topic> known_topics() noexcept;
const Topic* find_topic_by_id(std::string_view id) noexcept;
const Topic* find_topic_by_name(std::string_view name) noexcept;

enum class SplitPart { Train, Dev, Test };
enum class SplitScheme { InDomain, CrossDomain };

std::string_view to_string(SplitPart p) noexcept;
std::string_view to_string(SplitScheme s) noexcept;
std::optional<SplitPart> parse_split_part(std::string_view s) noexcept;
std::optional<SplitScheme> parse_split_scheme(std::string_view s) noexcept;

struct LabeledSentence {
  std::string sentence_id;
  Topic topic;
  std::vector<std::string> tokens;
  Labels labels;
  std::optional<SplitPart> split_in_domain;
  // Unset for topics outside the cross-domain split and for in-domain test
  // sentences, which are excluded from cross-domain train/dev.
  std::optional<SplitPart> split_cross_domain;

  std::size_t size() const noexcept { return tokens.size(); }
  std::optional<SplitPart> split(SplitScheme scheme) const noexcept {
    return scheme == SplitScheme::InDomain ? split_in_domain
                                           : split_cross_domain;
  }
  bool is_argumentative() const noexcept;

  friend bool operator==(const LabeledSentence&,
                         const LabeledSentence&) = default;
};

// Stored order is meaningful: splits and token streams follow it.
using Corpus = std::vector<LabeledSentence>;

// Sentence-length bounds used when sampling candidates.
inline constexpr std::size_t kMinSentenceTokens = 3;
inline constexpr std::size_t kMaxSentenceTokens = 45;

/// Structural checks on one sentence: non-empty id, known topic, matching
/// token/label lengths. Throws ValidationError mentioning the sentence id.
void validate_sentence(const LabeledSentence& s);

/// validate_sentence on every record plus sentence id uniqueness.
void validate_corpus(const Corpus& corpus);

/// Sentences assigned to `part` under `scheme`, in stored order.
Corpus select_split(const Corpus& corpus, SplitScheme scheme, SplitPart part);

struct SplitOptions {
  // Keep split tags already present in the input (e.g. the released split
  // assignment) instead of recomputing them.
  bool keep_existing = true;
};

/// Assigns in-domain and cross-domain split tags.
///
/// In-domain: per topic T1-T6, the first 70% of that topic's sentences (in
/// stored order) are Train, the next 10% Dev, the remaining 20% Test.
/// Cross-domain: T1-T5 Train, T6 Dev, T7-T8 Test, where in-domain Test
/// sentences are left out of cross-domain Train and Dev.
///
/// T1-T6 must be present with one common per-topic count divisible by 10.
/// T7/T8 are optional but, when present, must have that same count.
Corpus make_splits(Corpus corpus, const SplitOptions& options = {});

struct TopicStats {
  Topic topic;
  std::size_t sentences = 0;
  std::size_t arg_sentences = 0;
  std::size_t arg_units = 0;
  std::size_t non_arg_sentences = 0;
  // (arg_units - arg_sentences) / arg_sentences * 100; 0 and flagged when
  // there are no argumentative sentences.
  double increase_percent = 0.0;
  bool increase_undefined = false;
  std::size_t segment_tokens = 0;
  double mean_segment_length = 0.0;  // 0 when there are no segments
};

struct CorpusStats {
  std::vector<TopicStats> per_topic;  // ordered by topic id
  TopicStats total;                   // topic = {"total", "total"}
};

CorpusStats compute_stats(const Corpus& corpus);

/// "<Topic> should be supported because <span>" for PRO, "opposed" for CON.
/// The topic name is capitalized; the segment's tokens are joined with
/// spaces except around punctuation and clitics. Throws ValidationError for NON.
std::string render_argument(std::span<const std::string> tokens,
                            const Segment& segment, const Topic& topic);
std::string render_argument(std::string_view span_text, const Topic& topic,
                            StanceLabel stance);

}  // namespace aurc
