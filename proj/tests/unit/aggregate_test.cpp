#include <algorithm>
#include <sstream>

#include "aurc/aggregate.hpp"
#include "aurc/error.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace aurc;

namespace {
constexpr auto P = StanceLabel::Pro;
constexpr auto C = StanceLabel::Con;
constexpr auto N = StanceLabel::Non;

AnnotationSet make_set(std::vector<Labels> rows) {
  AnnotationSet s;
  s.sentence_id = "s";
  for (std::size_t i = 0; i < rows.size(); ++i) s.annotations["a" + std::to_string(i)] = rows[i];
  return s;
}

// Independent tally: count each label, pick the unique maximum or NON.
StanceLabel tally_oracle(const std::vector<StanceLabel>& votes) {
  int pro = 0, con = 0, non = 0;
  for (auto v : votes) {
    pro += v == P;
    con += v == C;
    non += v == N;
  }
  const int top = std::max({pro, con, non});
  const int holders = (pro == top) + (con == top) + (non == top);
  if (holders > 1) return N;
  return pro == top ? P : (con == top ? C : N);
}
}  // namespace

TEST_CASE("majority_vote tie rule") {
  CHECK(majority_vote(make_set({{P}, {P}, {P}, {P}, {P}})) == Labels{P});
  CHECK(majority_vote(make_set({{P}, {P}, {C}, {C}, {N}})) == Labels{N});
  CHECK(majority_vote(make_set({{P}, {P}, {N}, {N}, {C}})) == Labels{N});
  CHECK(majority_vote(make_set({{C}, {C}, {P}, {N}, {N}})) == Labels{N});
  CHECK(majority_vote(make_set({{C}, {C}, {P}, {N}, {C}})) == Labels{C});
}

TEST_CASE("majority_vote errors") {
  CHECK_THROWS_AS(majority_vote(make_set({{P, N}, {P}})), ValidationError);
  CHECK_THROWS_AS(majority_vote(AnnotationSet{"x", {}}), ValidationError);
}

TEST_CASE("majority_vote properties") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n_ann = 1 + rng.below(9);
    const auto len = 1 + rng.below(30);
    const auto set = testing::random_annotation_set(rng, "s", n_ann, len);
    const auto voted = majority_vote(set);
    REQUIRE(voted.size() == len);

    // permutation invariance: shuffle the rows under new annotator ids
    std::vector<const Labels*> rows;
    for (const auto& [who, l] : set.annotations) rows.push_back(&l);
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);
    CHECK(majority_vote(rows) == voted);

    if (n_ann == 1) CHECK(voted == set.annotations.begin()->second);
  }
}

TEST_CASE("aggregate_gold") {
  const Labels same{N, P, P, N, C};
  CHECK(aggregate_gold(make_set({same, same, same})) == same);

  const auto gold = aggregate_gold(make_set({{P, P, P}, {P, P, P}, {N, P, P}}));
  CHECK(gold == Labels{P, P, P});
  CHECK(labels_to_segments(gold) == std::vector<Segment>{{P, 0, 3}});

  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto set = testing::random_annotation_set(rng, "s", 5, 25);
    const auto out = aggregate_gold(set);
    for (std::size_t t = 0; t < 25; ++t) {
      std::vector<StanceLabel> votes;
      for (const auto& [who, l] : set.annotations) votes.push_back(l[t]);
      CHECK(out[t] == tally_oracle(votes));
    }
  }
}

TEST_CASE("overlap_curve") {
  const Labels a{P, P, N, N}, b{P, N, N, C}, c{N, N, C, C};
  const auto set = make_set({a, b, c});
  const std::vector<AnnotationSet> sets{set};
  const std::vector<Labels> ref{majority_vote(set)};
  REQUIRE(ref[0] == Labels{P, N, N, C});

  // Exhaustive subset oracle for k=2: {a,b}, {a,c}, {b,c}.
  std::size_t agree = 0;
  for (auto pair : {std::pair{&a, &b}, std::pair{&a, &c}, std::pair{&b, &c}}) {
    const auto v = majority_vote(std::vector<const Labels*>{pair.first, pair.second});
    for (std::size_t t = 0; t < 4; ++t) agree += v[t] == ref[0][t];
  }
  const double oracle = 100.0 * static_cast<double>(agree) / 12.0;
  CHECK(oracle == doctest::Approx(200.0 / 3.0));  // hand tally: 3 + 2 + 3 of 12
  CHECK(overlap_curve(ref, sets, 2) == doctest::Approx(oracle));

  CHECK(overlap_curve(ref, sets, 3) == doctest::Approx(100.0));
  const auto twins = make_set({a, a});
  CHECK(overlap_curve({a}, {twins}, 1) == doctest::Approx(100.0));

  CHECK_THROWS_AS(overlap_curve(ref, sets, 0), ValidationError);
  CHECK_THROWS_AS(overlap_curve(ref, sets, 4), ValidationError);

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AnnotationSet> many;
    std::vector<Labels> refs;
    for (int s = 0; s < 3; ++s) {
      many.push_back(testing::random_annotation_set(rng, "s" + std::to_string(s), 5, 10));
      refs.push_back(majority_vote(many.back()));
    }
    for (std::size_t k = 1; k <= 5; ++k) {
      const auto v = overlap_curve(refs, many, k);
      CHECK(v >= 0.0);
      CHECK(v <= 100.0);
    }
  }
}

TEST_CASE("annotation JSONL and corpus aggregation") {
  std::stringstream in(
      R"({"sentence_id":"s1","annotator_id":"w1","labels":["PRO","PRO","NON"],"tokens":["a","b","c"],"topic_id":"T2"})"
      "\n"
      R"({"sentence_id":"s1","annotator_id":"w2","labels":["PRO","NON","NON"]})"
      "\n"
      R"({"sentence_id":"s1","annotator_id":"w3","labels":["PRO","PRO","CON"]})"
      "\n"
      R"({"sentence_id":"s2","annotator_id":"w1","labels":["CON","CON"]})"
      "\n"
      R"({"sentence_id":"s2","annotator_id":"w2","labels":["CON","NON"]})"
      "\n");
  const auto records = read_annotations_jsonl(in);
  REQUIRE(records.size() == 5);

  LabeledSentence known;
  known.sentence_id = "s2";
  known.topic = *find_topic_by_id("T7");
  known.tokens = {"x", "y"};
  known.labels = {N, N};
  const auto corpus = aggregate_corpus(records, {known});
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].labels == Labels{P, P, N});
  CHECK(corpus[0].topic.id == "T2");
  CHECK(corpus[1].labels == Labels{C, N});
  CHECK(corpus[1].tokens == known.tokens);

  CHECK_THROWS_AS(aggregate_corpus(records), ValidationError);  // s2 has no tokens

  std::stringstream twice(R"({"sentence_id":"s","annotator_id":"w","labels":["NON"]})"
                          "\n"
                          R"({"sentence_id":"s","annotator_id":"w","labels":["NON"]})");
  CHECK_THROWS_AS(group_annotations(read_annotations_jsonl(twice)), ValidationError);
}
