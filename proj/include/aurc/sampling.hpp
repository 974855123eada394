#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aurc/corpus.hpp"
#include "aurc/labels.hpp"

namespace aurc {

// A pre-scored sentence. Scores come from an external retrieval and
// sentence classification stage.
struct ScoredCandidate {
  Topic topic;
  std::string sentence_id;
  std::vector<std::string> tokens;
  double doc_score = 0.0;     // higher = more relevant
  double arg_score = 0.0;     // in [0, 1)
  StanceLabel stance = StanceLabel::Pro;  // PRO or CON
  double stance_score = 0.0;  // in [0, 1]

  friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

struct RankedCandidate {
  ScoredCandidate candidate;
  std::size_t doc_rank = 0;
  std::size_t arg_rank = 0;
  std::size_t stance_rank = 0;
  std::size_t agg = 0;  // doc_rank + arg_rank + stance_rank
};

inline constexpr double kMinArgScore = 0.5;
inline constexpr std::size_t kDefaultTarget = 500;
inline constexpr double kDefaultSelectProbability = 0.5;

/// Keeps candidates with 3..45 tokens and arg_score >= 0.5.
std::vector<ScoredCandidate> filter_candidates(std::vector<ScoredCandidate> candidates);

/// Competition ranks (1 = highest score) per score, summed into agg, sorted by
/// agg ascending with sentence_id as the final tie-break. All candidates must
/// share topic and stance (ValidationError otherwise).
std::vector<RankedCandidate> rank_aggregate(const std::vector<ScoredCandidate>& group);

/// Walks the ranked list top-down, taking each not-yet-selected item with
/// probability p, and repeats passes until n items are selected or the list
/// is exhausted. Items are returned in selection order. Requires 0 < p <= 1.
std::vector<RankedCandidate> probabilistic_select(const std::vector<RankedCandidate>& ranked,
                                                  std::size_t n, double p,
                                                  std::uint64_t seed);

struct GroupSummary {
  Topic topic;
  StanceLabel stance = StanceLabel::Pro;
  std::size_t candidates = 0;  // before filtering
  std::size_t eligible = 0;    // after filtering
  std::size_t selected = 0;
  std::uint64_t seed = 0;
};

struct SamplingResult {
  std::vector<RankedCandidate> selected;  // grouped by topic id, then PRO, CON
  std::vector<GroupSummary> groups;
};

struct SamplingOptions {
  std::size_t n = kDefaultTarget;
  double p = kDefaultSelectProbability;
  std::uint64_t seed = 0;
  std::string topic_id;  // empty = all topics
};

/// Seed of one topic x stance group, derived from the master seed.
std::uint64_t group_seed(std::uint64_t master, const Topic& topic, StanceLabel stance);

/// Filter, partition by topic and stance, rank and select each group.
SamplingResult run_sampling(const std::vector<ScoredCandidate>& candidates,
                            const SamplingOptions& options);

std::vector<ScoredCandidate> read_candidates_jsonl(std::istream& in,
                                                   const std::string& source = "<stream>");
void write_selection_jsonl(const SamplingResult& result, std::ostream& out);

}  // namespace aurc
