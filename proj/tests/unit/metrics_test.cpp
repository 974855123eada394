#include <cmath>

#include "aurc/error.hpp"
#include "aurc/metrics.hpp"
#include "aurc/random.hpp"
#include "aurc/tagger.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace aurc;

namespace {
constexpr auto P = StanceLabel::Pro;
constexpr auto C = StanceLabel::Con;
constexpr auto N = StanceLabel::Non;

LabeledSentence sentence(const std::string& id, Labels labels) {
  LabeledSentence s;
  s.sentence_id = id;
  s.topic = *find_topic_by_id("T1");
  for (std::size_t i = 0; i < labels.size(); ++i) s.tokens.push_back("w" + std::to_string(i));
  s.labels = std::move(labels);
  return s;
}

double seg_f1(std::vector<Segment> g, std::vector<Segment> p) {
  return segment_f1_sentence(g, p);
}
}  // namespace

TEST_CASE("score_class") {
  const auto s = score_class("PRO", 2, 4, 5);
  CHECK(s.precision == doctest::Approx(0.5));
  CHECK(s.recall == doctest::Approx(0.4));
  CHECK(s.f1 == doctest::Approx(0.4 / 0.9));
  const auto empty = score_class("CON", 0, 0, 0);
  CHECK(empty.precision == 0.0);
  CHECK(empty.recall == 0.0);
  CHECK(empty.f1 == 0.0);
}

TEST_CASE("token F1 on a hand-counted example") {
  const Corpus gold{sentence("s1", {P, P, N, N, C}), sentence("s2", {N, N, P})};
  const Predictions pred{{"s1", {P, N, N, C, C}}, {"s2", {N, P, P}}};

  const auto r = token_f1(gold, pred);
  REQUIRE(r.classes.size() == 3);
  CHECK(r.classes[0].name == "PRO");
  CHECK(r.classes[0].true_positives == 2);
  CHECK(r.classes[0].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.classes[1].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.classes[2].f1 == doctest::Approx(4.0 / 7.0));
  CHECK(r.macro_f1 == doctest::Approx(40.0 / 63.0));
  CHECK(r.n_sentences == 2);

  const auto two = token_f1(gold, pred, ClassSet::Two);
  REQUIRE(two.classes.size() == 2);
  CHECK(two.classes[0].name == "ARG");
  CHECK(two.classes[0].precision == doctest::Approx(0.6));
  CHECK(two.classes[0].recall == doctest::Approx(0.75));
  CHECK(two.macro_f1 == doctest::Approx(13.0 / 21.0));

  CHECK(token_f1(gold, gold_predictions(gold)).macro_f1 == doctest::Approx(1.0));
}

TEST_CASE("prediction checks") {
  const Corpus gold{sentence("s1", {P, N})};
  CHECK_THROWS_AS(token_f1(gold, Predictions{}), ValidationError);
  CHECK_THROWS_AS(token_f1(gold, Predictions{{"s1", {P}}}), ValidationError);
  CHECK_NOTHROW(token_f1(gold, Predictions{{"s1", {P, N}}, {"extra", {N}}}));
}

TEST_CASE("segment matching") {
  CHECK(overlap_ratio({P, 0, 10}, {P, 1, 9}) == doctest::Approx(0.8));
  CHECK(segments_match({P, 0, 10}, {P, 1, 9}));
  CHECK_FALSE(segments_match({P, 0, 4}, {P, 0, 2}));  // exactly one half
  CHECK(segments_match({P, 0, 5}, {P, 0, 3}));
  CHECK(overlap_ratio({P, 0, 3}, {P, 5, 9}) == 0.0);

  CHECK(seg_f1({{P, 0, 10}}, {{P, 1, 9}}) == doctest::Approx(1.0));
  CHECK(seg_f1({}, {}) == 1.0);
  CHECK(seg_f1({{P, 0, 3}}, {}) == 0.0);
  CHECK(seg_f1({}, {{C, 0, 3}}) == 0.0);
  CHECK(seg_f1({{P, 0, 10}}, {{C, 0, 10}}) == 0.0);
  CHECK(seg_f1({{P, 0, 9}}, {{P, 0, 4}, {C, 5, 9}}) == 0.0);
  // one of two gold found, one of one prediction correct: P=1, R=0.5
  CHECK(seg_f1({{P, 0, 4}, {C, 6, 9}}, {{P, 0, 4}}) == doctest::Approx(2.0 / 3.0));

  CHECK_THROWS_AS(seg_f1({{N, 0, 3}}, {}), ValidationError);
  CHECK_THROWS_AS(seg_f1({{P, 0, 3}, {P, 2, 5}}, {}), ValidationError);
}

TEST_CASE("segment matching is one-to-one") {
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto len = 1 + rng.below(40);
    const auto g = testing::random_segments(rng, len);
    const auto p = testing::random_segments(rng, len);
    for (const auto& a : g) {
      int hits = 0;
      for (const auto& b : p) hits += segments_match(a, b);
      CHECK(hits <= 1);
    }
    for (const auto& b : p) {
      int hits = 0;
      for (const auto& a : g) hits += segments_match(a, b);
      CHECK(hits <= 1);
    }
    const auto f = seg_f1(g, p);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(seg_f1(g, g) == 1.0);
  }
}

TEST_CASE("segment F1 over a corpus") {
  const Corpus gold{sentence("a", {P, P, P, N}), sentence("b", {N, N}), sentence("c", {C, C})};
  const Predictions pred{{"a", {P, P, P, N}}, {"b", {N, C}}, {"c", {C, C}}};
  const auto r = segment_f1(gold, pred);
  CHECK(r.classes.empty());
  CHECK(r.macro_f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("sentence label") {
  CHECK(sentence_label(Labels{N, N}, 0) == N);
  CHECK(sentence_label(Labels{P, P, C}, 0) == P);
  CHECK(sentence_label(Labels{C, N, C, P}, 0) == C);
  CHECK(sentence_label(Labels{C}, 0) == C);
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto expect = (splitmix64(seed) & 1U) ? C : P;
    CHECK(sentence_label(Labels{P, C, N}, seed) == expect);
  }
  CHECK(sentence_tie_seed(1, "x") == sentence_tie_seed(1, "x"));
  CHECK(sentence_tie_seed(1, "x") != sentence_tie_seed(1, "y"));
  CHECK(sentence_tie_seed(1, "x") != sentence_tie_seed(2, "x"));
}

TEST_CASE("sentence F1 is order independent and seeded") {
  const Corpus gold{sentence("a", {P, C}), sentence("b", {C, C}), sentence("c", {N, N}),
                    sentence("d", {P, N})};
  const Predictions pred{{"a", {C, P}}, {"b", {P, C}}, {"c", {N, P}}, {"d", {P, P}}};
  const auto r = sentence_f1(gold, pred, 7);
  REQUIRE(r.tie_seed.has_value());
  CHECK(*r.tie_seed == 7);
  const Corpus reversed(gold.rbegin(), gold.rend());
  CHECK(sentence_f1(reversed, pred, 7).macro_f1 == doctest::Approx(r.macro_f1));
  // the same tied sequence gets the same coin on both sides
  const Predictions copy{{"a", {P, C}}, {"b", {C, C}}, {"c", {N, N}}, {"d", {P, N}}};
  CHECK(sentence_f1(gold, copy, 7).macro_f1 == doctest::Approx(1.0));
}

TEST_CASE("two classes equal three classes without CON") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    Corpus gold;
    Predictions pred;
    for (int s = 0; s < 4; ++s) {
      auto g = testing::random_labels(rng, 10);
      auto p = testing::random_labels(rng, 10);
      for (auto& x : g) x = x == C ? P : x;
      for (auto& x : p) x = x == C ? N : x;
      gold.push_back(sentence("s" + std::to_string(s), g));
      pred["s" + std::to_string(s)] = p;
    }
    const auto t3 = token_f1(gold, pred, ClassSet::Three);
    const auto t2 = token_f1(gold, pred, ClassSet::Two);
    CHECK(t2.classes[0].f1 == doctest::Approx(t3.classes[0].f1));
    CHECK(t2.classes[1].f1 == doctest::Approx(t3.classes[2].f1));
    CHECK(segment_f1(gold, pred, ClassSet::Two).macro_f1 ==
          doctest::Approx(segment_f1(gold, pred, ClassSet::Three).macro_f1));
    CHECK(merge_argumentative(gold[0].labels) == gold[0].labels);
  }
}

TEST_CASE("majority baseline closed forms") {
  const auto corpus = testing::synthetic_corpus(25, 4);
  const auto pred = predict_corpus(majority_predictor(), corpus, PredictionLevel::Token);

  double non_tokens = 0, tokens = 0, non_sentences = 0;
  for (const auto& s : corpus) {
    for (auto l : s.labels) non_tokens += l == N;
    tokens += static_cast<double>(s.labels.size());
    non_sentences += !s.is_argumentative();
  }
  const double p = non_tokens / tokens;
  const double q = non_sentences / static_cast<double>(corpus.size());

  CHECK(token_f1(corpus, pred).macro_f1 == doctest::Approx(2.0 * p / (1.0 + p) / 3.0));
  CHECK(segment_f1(corpus, pred).macro_f1 == doctest::Approx(q));
  CHECK(sentence_f1(corpus, pred).macro_f1 == doctest::Approx(2.0 * q / (1.0 + q) / 3.0));
}
