#include "aurc/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "aurc/error.hpp"

namespace aurc {
namespace {

const std::array<Topic, 8> kTopics = {{
    {"T1", "abortion"},
    {"T2", "cloning"},
    {"T3", "marijuana legalization"},
    {"T4", "minimum wage"},
    {"T5", "nuclear energy"},
    {"T6", "death penalty"},
    {"T7", "gun control"},
    {"T8", "school uniforms"},
}};

constexpr std::array<std::string_view, 6> kInDomainTopics = {"T1", "T2", "T3",
                                                             "T4", "T5", "T6"};

std::optional<SplitPart> cross_domain_part(std::string_view topic_id) {
  if (topic_id == "T6") return SplitPart::Dev;
  if (topic_id == "T7" || topic_id == "T8") return SplitPart::Test;
  return SplitPart::Train;
}

bool attaches_left(std::string_view tok) {
  static const std::unordered_set<std::string_view> kLeft = {
      ".", ",", ";", ":", "!", "?", ")", "]", "}", "%", "'s", "n't", "'re",
      "'ve", "'ll", "'d", "'m"};
  return kLeft.contains(tok);
}

bool attaches_right(std::string_view tok) {
  return tok == "(" || tok == "[" || tok == "{" || tok == "$";
}

void accumulate(TopicStats& st, const LabeledSentence& s) {
  ++st.sentences;
  const auto segments = labels_to_segments(s.labels);
  if (segments.empty()) {
    ++st.non_arg_sentences;
  } else {
    ++st.arg_sentences;
    st.arg_units += segments.size();
    for (const auto& seg : segments) st.segment_tokens += seg.length();
  }
}

void finish(TopicStats& st) {
  if (st.arg_sentences == 0) {
    st.increase_percent = 0.0;
    st.increase_undefined = true;
  } else {
    st.increase_percent =
        (static_cast<double>(st.arg_units) -
         static_cast<double>(st.arg_sentences)) /
        static_cast<double>(st.arg_sentences) * 100.0;
  }
  st.mean_segment_length =
      st.arg_units == 0 ? 0.0
                        : static_cast<double>(st.segment_tokens) /
                              static_cast<double>(st.arg_units);
}

}  // namespace

std::span<const Topic> known_topics() noexcept { return kTopics; }

const Topic* find_topic_by_id(std::string_view id) noexcept {
  for (const auto& t : kTopics)
    if (t.id == id) return &t;
  return nullptr;
}

const Topic* find_topic_by_name(std::string_view name) noexcept {
  for (const auto& t : kTopics) {
    if (t.name.size() != name.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < name.size() && same; ++i) {
      same = std::tolower(static_cast<unsigned char>(name[i])) == t.name[i];
    }
    if (same) return &t;
  }
  return nullptr;
}

std::string_view to_string(SplitPart p) noexcept {
  switch (p) {
    case SplitPart::Train:
      return "Train";
    case SplitPart::Dev:
      return "Dev";
    case SplitPart::Test:
      return "Test";
  }
  return "Train";
}

std::string_view to_string(SplitScheme s) noexcept {
  return s == SplitScheme::InDomain ? "in-domain" : "cross-domain";
}

std::optional<SplitPart> parse_split_part(std::string_view s) noexcept {
  if (s == "Train" || s == "train") return SplitPart::Train;
  if (s == "Dev" || s == "dev") return SplitPart::Dev;
  if (s == "Test" || s == "test") return SplitPart::Test;
  return std::nullopt;
}

std::optional<SplitScheme> parse_split_scheme(std::string_view s) noexcept {
  if (s == "in-domain") return SplitScheme::InDomain;
  if (s == "cross-domain") return SplitScheme::CrossDomain;
  return std::nullopt;
}

bool LabeledSentence::is_argumentative() const noexcept {
  return std::any_of(labels.begin(), labels.end(),
                     [](StanceLabel l) { return aurc::is_argumentative(l); });
}

void validate_sentence(const LabeledSentence& s) {
  const std::string where = "sentence '" + s.sentence_id + "': ";
  if (s.sentence_id.empty()) throw ValidationError("sentence with empty id");
  const Topic* t = find_topic_by_id(s.topic.id);
  if (t == nullptr) {
    throw ValidationError(where + "unknown topic id '" + s.topic.id + "'");
  }
  if (t->name != s.topic.name) {
    throw ValidationError(where + "topic name '" + s.topic.name +
                          "' does not match " + t->id + " ('" + t->name +
                          "')");
  }
  if (s.tokens.empty()) throw ValidationError(where + "no tokens");
  if (s.tokens.size() != s.labels.size()) {
    throw ValidationError(where + std::to_string(s.tokens.size()) +
                          " tokens but " + std::to_string(s.labels.size()) +
                          " labels");
  }
}

void validate_corpus(const Corpus& corpus) {
  std::unordered_set<std::string_view> seen;
  for (const auto& s : corpus) {
    validate_sentence(s);
    if (!seen.insert(s.sentence_id).second) {
      throw ValidationError("duplicate sentence id '" + s.sentence_id + "'");
    }
  }
}

Corpus select_split(const Corpus& corpus, SplitScheme scheme, SplitPart part) {
  Corpus out;
  for (const auto& s : corpus) {
    if (s.split(scheme) == part) out.push_back(s);
  }
  return out;
}

Corpus make_splits(Corpus corpus, const SplitOptions& options) {
  validate_corpus(corpus);
  if (options.keep_existing) {
    const bool any_tagged =
        std::any_of(corpus.begin(), corpus.end(), [](const auto& s) {
          return s.split_in_domain.has_value() ||
                 s.split_cross_domain.has_value();
        });
    if (any_tagged) return corpus;
  }

  std::map<std::string, std::size_t> counts;
  for (const auto& s : corpus) ++counts[s.topic.id];
  for (auto id : kInDomainTopics) {
    if (!counts.contains(std::string(id))) {
      throw ValidationError("make_splits: topic " + std::string(id) +
                            " missing from corpus");
    }
  }
  const std::size_t per_topic = counts.at("T1");
  if (per_topic % 10 != 0) {
    throw ValidationError("make_splits: per-topic count " +
                          std::to_string(per_topic) +
                          " is not divisible by 10");
  }
  for (const auto& [id, n] : counts) {
    if (n != per_topic) {
      throw ValidationError("make_splits: topic " + id + " has " +
                            std::to_string(n) + " sentences, expected " +
                            std::to_string(per_topic));
    }
  }

  const std::size_t n_train = per_topic * 7 / 10;
  const std::size_t n_dev = per_topic / 10;
  std::map<std::string, std::size_t> seen;
  for (auto& s : corpus) {
    const bool in_domain_topic =
        std::find(kInDomainTopics.begin(), kInDomainTopics.end(),
                  s.topic.id) != kInDomainTopics.end();
    const std::size_t rank = seen[s.topic.id]++;
    s.split_in_domain.reset();
    s.split_cross_domain = cross_domain_part(s.topic.id);
    if (!in_domain_topic) continue;
    if (rank < n_train) {
      s.split_in_domain = SplitPart::Train;
    } else if (rank < n_train + n_dev) {
      s.split_in_domain = SplitPart::Dev;
    } else {
      s.split_in_domain = SplitPart::Test;
      s.split_cross_domain.reset();
    }
  }
  return corpus;
}

CorpusStats compute_stats(const Corpus& corpus) {
  std::map<std::string, TopicStats> by_topic;
  CorpusStats out;
  out.total.topic = {"total", "total"};
  for (const auto& s : corpus) {
    auto& st = by_topic[s.topic.id];
    st.topic = s.topic;
    accumulate(st, s);
    accumulate(out.total, s);
  }
  for (auto& [id, st] : by_topic) {
    finish(st);
    out.per_topic.push_back(st);
  }
  finish(out.total);
  return out;
}

std::string render_argument(std::string_view span_text, const Topic& topic,
                            StanceLabel stance) {
  if (!is_argumentative(stance)) {
    throw ValidationError("render_argument: NON is not an argument stance");
  }
  std::string subject = topic.name;
  if (!subject.empty()) {
    subject[0] = static_cast<char>(
        std::toupper(static_cast<unsigned char>(subject[0])));
  }
  return subject + " should be " +
         (stance == StanceLabel::Pro ? "supported" : "opposed") +
         " because " + std::string(span_text);
}

std::string render_argument(std::span<const std::string> tokens,
                            const Segment& segment, const Topic& topic) {
  if (!is_argumentative(segment.label)) {
    throw ValidationError("render_argument: NON is not an argument stance");
  }
  if (segment.start >= segment.end || segment.end > tokens.size()) {
    throw ValidationError("render_argument: segment " + to_string(segment) +
                          " outside sentence of " +
                          std::to_string(tokens.size()) + " tokens");
  }
  std::string text;
  for (std::size_t i = segment.start; i < segment.end; ++i) {
    const bool glue = i == segment.start || attaches_left(tokens[i]) ||
                      attaches_right(tokens[i - 1]);
    if (!glue) text += ' ';
    text += tokens[i];
  }
  return render_argument(text, topic, segment.label);
}

}  // namespace aurc
