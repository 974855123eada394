#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "aurc/corpus.hpp"
#include "aurc/labels.hpp"

namespace aurc {

// All annotators' label sequences for one sentence, keyed by annotator id.
struct AnnotationSet {
  std::string sentence_id;
  std::map<std::string, Labels> annotations;
};

/// Throws ValidationError unless there is at least one annotator and all
/// sequences share one non-zero length.
void validate_annotation_set(const AnnotationSet& set);

/// Per token, the label with the strictly highest vote count. Any tie for
/// the maximum resolves to NON.
Labels majority_vote(const AnnotationSet& set);

/// Same rule over an explicit list of sequences (all equal length).
Labels majority_vote(const std::vector<const Labels*>& votes);

/// Majority vote followed by maximal-run canonicalization.
Labels aggregate_gold(const AnnotationSet& set);

// Pluggable gold aggregator; majority_vote is the built-in one.
using GoldAggregator = std::function<Labels(const AnnotationSet&)>;

/// Token-level percentage agreement (0-100) between `reference` and the
/// majority vote of every size-k annotator subset, pooled over all subsets
/// and all tokens of all sentences. `reference[i]` pairs with `sets[i]`.
/// Throws ValidationError when k is 0 or exceeds any sentence's annotator
/// count, or when lengths disagree.
double overlap_curve(const std::vector<Labels>& reference,
                     const std::vector<AnnotationSet>& sets, std::size_t k);

// Annotation JSONL: one object per (sentence_id, annotator_id) with a labels
// array. Records may also carry tokens, topic_id and topic_name so that the
// aggregated corpus can be written without a separate sentence file.
struct AnnotationRecord {
  std::string sentence_id;
  std::string annotator_id;
  Labels labels;
  std::vector<std::string> tokens;  // empty when absent
  std::string topic_id;             // empty when absent
};

std::vector<AnnotationRecord> read_annotations_jsonl(
    std::istream& in, const std::string& source = "<stream>");

/// Groups records by sentence, preserving first-appearance order.
std::vector<AnnotationSet> group_annotations(
    const std::vector<AnnotationRecord>& records);

/// Builds gold sentences. Tokens and topic come from the records or, when
/// absent there, from `sentences` (matched by id).
Corpus aggregate_corpus(const std::vector<AnnotationRecord>& records,
                        const Corpus& sentences = {},
                        const GoldAggregator& aggregator = aggregate_gold);

}  // namespace aurc
