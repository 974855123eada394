#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aurc/corpus.hpp"
#include "aurc/corpus_io.hpp"
#include "aurc/labels.hpp"

namespace aurc {

enum class Measure { Token, Segment, Sentence };
// Three = PRO/CON/NON classification; Two = ARG/NON recognition, where PRO
// and CON are merged into ARG on both sides before scoring.
enum class ClassSet { Three, Two };

std::string_view to_string(Measure m) noexcept;
std::optional<Measure> parse_measure(std::string_view s) noexcept;

inline constexpr std::uint64_t kDefaultTieSeed = 1;

struct ClassScores {
  std::string name;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // gold count
  std::size_t predicted = 0;  // predicted count
  std::size_t true_positives = 0;
};

struct EvalReport {
  Measure measure = Measure::Token;
  ClassSet class_set = ClassSet::Three;
  // Empty for the segment measure, which averages per-sentence F1 instead.
  std::vector<ClassScores> classes;
  double macro_f1 = 0.0;
  std::size_t n_sentences = 0;
  std::optional<std::uint64_t> tie_seed;  // sentence measure only
};

// Precision, recall and F1 from counts; 0/0 is taken as 0.
ClassScores score_class(std::string name, std::size_t tp, std::size_t predicted,
                        std::size_t gold);

/// PRO and CON become one argumentative label (reported as ARG).
Labels merge_argumentative(std::span<const StanceLabel> labels);

/// Throws ValidationError if any gold sentence lacks a prediction or the
/// lengths differ. Predictions for sentences outside `gold` are ignored.
void check_predictions(const Corpus& gold, const Predictions& preds);

EvalReport token_f1(const Corpus& gold, const Predictions& preds,
                    ClassSet classes = ClassSet::Three);

/// Overlap ratio |g ∩ p| / max(|g|, |p|).
double overlap_ratio(const Segment& g, const Segment& p) noexcept;

/// True iff the overlap ratio exceeds 0.5 (evaluated in integers).
bool segments_match(const Segment& g, const Segment& p) noexcept;

/// Segment F1 for one sentence. A predicted segment is a true positive iff
/// some gold segment with the same label matches it; recall counts matched
/// gold segments. Both sides empty scores 1, exactly one side empty scores 0.
/// Throws ValidationError on NON, empty or overlapping segments.
double segment_f1_sentence(std::span<const Segment> gold,
                           std::span<const Segment> predicted);

/// Mean of segment_f1_sentence over the gold sentences.
EvalReport segment_f1(const Corpus& gold, const Predictions& preds,
                      ClassSet classes = ClassSet::Three);

/// NON if no argumentative token; the only stance if one occurs; otherwise
/// the stance with more tokens, and a coin flip derived from `tie_seed` on
/// an exact tie.
StanceLabel sentence_label(std::span<const StanceLabel> labels,
                           std::uint64_t tie_seed);

/// Tie seed used for a particular sentence, so corpus-level results do not
/// depend on evaluation order.
std::uint64_t sentence_tie_seed(std::uint64_t tie_seed,
                                std::string_view sentence_id) noexcept;

EvalReport sentence_f1(const Corpus& gold, const Predictions& preds,
                       std::uint64_t tie_seed = kDefaultTieSeed,
                       ClassSet classes = ClassSet::Three);

}  // namespace aurc
