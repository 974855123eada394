#include <cmath>
#include <set>

#include "aurc/corpus.hpp"
#include "aurc/error.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace aurc;

namespace {

constexpr auto P = StanceLabel::Pro;
constexpr auto C = StanceLabel::Con;
constexpr auto N = StanceLabel::Non;

LabeledSentence sentence(const std::string& id, const std::string& topic, Labels labels) {
  LabeledSentence s;
  s.sentence_id = id;
  s.topic = *find_topic_by_id(topic);
  s.labels = std::move(labels);
  for (std::size_t i = 0; i < s.labels.size(); ++i) s.tokens.push_back("t" + std::to_string(i));
  return s;
}

Corpus uniform_corpus(std::size_t per_topic, std::size_t n_topics) {
  Corpus c;
  for (std::size_t t = 0; t < n_topics; ++t) {
    const auto& topic = known_topics()[t];
    for (std::size_t i = 0; i < per_topic; ++i) {
      c.push_back(sentence(topic.id + "-" + std::to_string(i), topic.id, {N, N, N}));
    }
  }
  return c;
}

std::size_t count(const Corpus& c, SplitScheme scheme, SplitPart part) {
  return select_split(c, scheme, part).size();
}

}  // namespace

TEST_CASE("topic table") {
  REQUIRE(known_topics().size() == 8);
  CHECK(known_topics()[7].name == "school uniforms");
  CHECK(find_topic_by_name("Nuclear Energy")->id == "T5");
  CHECK(find_topic_by_id("T9") == nullptr);
}

TEST_CASE("validate_sentence") {
  auto s = sentence("a", "T1", {N, P});
  CHECK_NOTHROW(validate_sentence(s));
  s.labels.push_back(N);
  CHECK_THROWS_AS(validate_sentence(s), ValidationError);
  auto t = sentence("b", "T1", {N});
  t.topic.name = "cloning";
  CHECK_THROWS_AS(validate_sentence(t), ValidationError);
  Corpus dup{sentence("x", "T1", {N}), sentence("x", "T2", {N})};
  CHECK_THROWS_AS(validate_corpus(dup), ValidationError);
}

TEST_CASE("make_splits on a 6-topic toy corpus") {
  const auto c = make_splits(uniform_corpus(10, 6));
  for (std::size_t t = 0; t < 6; ++t) {
    const auto& id = known_topics()[t].id;
    std::size_t train = 0, dev = 0, test = 0;
    for (const auto& s : c) {
      if (s.topic.id != id) continue;
      train += s.split_in_domain == SplitPart::Train;
      dev += s.split_in_domain == SplitPart::Dev;
      test += s.split_in_domain == SplitPart::Test;
    }
    CHECK(train == 7);
    CHECK(dev == 1);
    CHECK(test == 2);
  }
  // first 70% of each topic in stored order is train
  CHECK(c[0].split_in_domain == SplitPart::Train);
  CHECK(c[6].split_in_domain == SplitPart::Train);
  CHECK(c[7].split_in_domain == SplitPart::Dev);
  CHECK(c[8].split_in_domain == SplitPart::Test);
  CHECK_FALSE(c[8].split_cross_domain.has_value());
}

TEST_CASE("make_splits at benchmark scale") {
  const auto c = make_splits(uniform_corpus(1000, 8));
  CHECK(count(c, SplitScheme::InDomain, SplitPart::Train) == 4200);
  CHECK(count(c, SplitScheme::InDomain, SplitPart::Dev) == 600);
  CHECK(count(c, SplitScheme::InDomain, SplitPart::Test) == 1200);
  CHECK(count(c, SplitScheme::CrossDomain, SplitPart::Train) == 4000);
  CHECK(count(c, SplitScheme::CrossDomain, SplitPart::Dev) == 800);
  CHECK(count(c, SplitScheme::CrossDomain, SplitPart::Test) == 2000);

  std::set<std::string> in_test;
  for (const auto& s : select_split(c, SplitScheme::InDomain, SplitPart::Test)) in_test.insert(s.sentence_id);
  for (auto part : {SplitPart::Train, SplitPart::Dev}) {
    for (const auto& s : select_split(c, SplitScheme::CrossDomain, part)) {
      CHECK_FALSE(in_test.contains(s.sentence_id));
    }
  }
  for (const auto& s : c) {
    if (s.topic.id == "T7" || s.topic.id == "T8") {
      CHECK_FALSE(s.split_in_domain.has_value());
      CHECK(s.split_cross_domain == SplitPart::Test);
    }
  }
}

TEST_CASE("make_splits is deterministic and respects released assignments") {
  const auto base = uniform_corpus(20, 8);
  CHECK(make_splits(base) == make_splits(base));

  auto tagged = base;
  tagged[0].split_in_domain = SplitPart::Test;
  CHECK(make_splits(tagged) == tagged);
  CHECK(make_splits(tagged, {.keep_existing = false})[0].split_in_domain == SplitPart::Train);
}

TEST_CASE("make_splits errors") {
  CHECK_THROWS_AS(make_splits(uniform_corpus(10, 5)), ValidationError);  // T6 missing
  CHECK_THROWS_AS(make_splits(uniform_corpus(15, 6)), ValidationError);  // not divisible
  auto uneven = uniform_corpus(10, 6);
  uneven.pop_back();
  CHECK_THROWS_AS(make_splits(uneven), ValidationError);
}

TEST_CASE("compute_stats") {
  Corpus c{
      sentence("a", "T8", {P, P, N, C, C, C}),  // 2 units, lengths 2 and 3
      sentence("b", "T8", {N, N, N}),
      sentence("c", "T8", {N, C, C, C, C}),  // 1 unit, length 4
      sentence("d", "T1", {P, P, P, P}),
  };
  const auto st = compute_stats(c);
  REQUIRE(st.per_topic.size() == 2);
  const auto& t8 = st.per_topic[1];
  CHECK(t8.topic.id == "T8");
  CHECK(t8.sentences == 3);
  CHECK(t8.arg_sentences == 2);
  CHECK(t8.arg_units == 3);
  CHECK(t8.non_arg_sentences == 1);
  CHECK(t8.increase_percent == doctest::Approx(50.0));
  CHECK(t8.mean_segment_length == doctest::Approx(3.0));
  CHECK(st.total.sentences == 4);
  CHECK(st.total.arg_units == 4);
  CHECK(st.total.arg_sentences + st.total.non_arg_sentences == st.total.sentences);
  CHECK(st.total.increase_percent == doctest::Approx(100.0 / 3.0));

  const auto empty = compute_stats({sentence("z", "T2", {N, N, N})});
  CHECK(empty.total.arg_sentences == 0);
  CHECK(empty.total.non_arg_sentences == 1);
  CHECK(empty.total.increase_percent == 0.0);
  CHECK(empty.total.increase_undefined);
}

TEST_CASE("compute_stats increase arithmetic on the published per-topic counts") {
  // Counts from the published corpus table; the percentages follow from them.
  struct Row { std::size_t arg_sent, arg_unit; double increase; };
  const Row rows[] = {{424, 458, 8.02},  {353, 380, 7.65},  {630, 689, 9.37},
                      {630, 703, 11.59}, {623, 684, 9.79},  {598, 651, 8.86},
                      {529, 587, 10.96}, {713, 821, 15.15}, {4500, 4973, 10.51}};
  for (const auto& r : rows) {
    Corpus c;
    for (std::size_t i = 0; i < r.arg_sent; ++i) {
      const bool two = i < r.arg_unit - r.arg_sent;
      c.push_back(sentence("s" + std::to_string(i), "T1", two ? Labels{P, N, C} : Labels{P, P, N}));
    }
    const auto st = compute_stats(c);
    CHECK(st.total.arg_units == r.arg_unit);
    CHECK(std::round(st.total.increase_percent * 100.0) / 100.0 == doctest::Approx(r.increase));
  }
}

TEST_CASE("render_argument") {
  const Topic uniforms = *find_topic_by_id("T8");
  CHECK(render_argument("they may create a sense of positive unity", uniforms, P) ==
        "School uniforms should be supported because they may create a sense of positive unity");

  const std::vector<std::string> tokens{"But", "they", "can", "also", "imply", "the", "sacrifice",
                                        "of", "individuality", "to", "a", "group", "mentally", "."};
  CHECK(render_argument(tokens, Segment{C, 1, 14}, uniforms) ==
        "School uniforms should be opposed because they can also imply the sacrifice of "
        "individuality to a group mentally.");
  CHECK_THROWS_AS(render_argument("anything", uniforms, N), ValidationError);
  CHECK_THROWS_AS(render_argument(tokens, Segment{N, 0, 2}, uniforms), ValidationError);
}
