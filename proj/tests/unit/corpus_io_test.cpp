#include <fstream>
#include <sstream>

#include "aurc/corpus_io.hpp"
#include "aurc/error.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace aurc;

namespace {
constexpr auto P = StanceLabel::Pro;
constexpr auto C = StanceLabel::Con;
constexpr auto N = StanceLabel::Non;

const std::string kText =
    "In my view uniforms create a sense of positive unity among students , says Kim .";
}  // namespace

TEST_CASE("corpus JSONL save/load round trip") {
  auto corpus = make_splits(testing::synthetic_corpus(10, 3));
  std::stringstream buf;
  write_corpus_jsonl(corpus, buf);
  CHECK(read_corpus_jsonl(buf) == corpus);

  std::stringstream again;
  write_corpus_jsonl(corpus, again);
  std::stringstream twice;
  write_corpus_jsonl(read_corpus_jsonl(again), twice);
  std::stringstream first;
  write_corpus_jsonl(corpus, first);
  CHECK(twice.str() == first.str());
}

TEST_CASE("corpus JSONL field layout") {
  std::stringstream in(
      R"({"sentence_id":"s1","topic_id":"T5","topic_name":"nuclear energy","tokens":["Energy","is","cheap"],"labels":["NON","PRO","PRO"],"split_in_domain":"Dev","split_cross_domain":null})"
      "\n");
  const auto c = read_corpus_jsonl(in);
  REQUIRE(c.size() == 1);
  CHECK(c[0].labels == Labels{N, P, P});
  CHECK(c[0].split_in_domain == SplitPart::Dev);
  CHECK_FALSE(c[0].split_cross_domain.has_value());

  std::stringstream out;
  write_corpus_jsonl(c, out);
  CHECK(out.str().rfind(R"({"sentence_id":"s1","topic_id":"T5","topic_name":"nuclear energy",)", 0) == 0);
}

TEST_CASE("corpus JSONL errors name the line") {
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    std::stringstream in(text);
    try {
      read_corpus_jsonl(in, "f.jsonl");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  const std::string ok =
      R"({"sentence_id":"a","topic_id":"T1","tokens":["x","y"],"labels":["NON","NON"]})";
  expect_error(ok + "\n" +
                   R"({"sentence_id":"b","topic_id":"T1","tokens":["x","y"],"labels":["NON"]})",
               "f.jsonl:2:");
  expect_error(R"({"sentence_id":"b","topic_id":"T1","tokens":["x"],"labels":["MAYBE"]})",
               "unknown label");
  expect_error("{not json", "malformed JSON");
  expect_error(R"({"sentence_id":"b","topic_id":"T1","labels":["NON"]})", "malformed record");
}

TEST_CASE("char span parsing") {
  auto spans = parse_char_spans("[(0, 52, 'PRO'), (60, 90, 'con')]");
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 52);
  CHECK(spans[1].label == C);
  CHECK(parse_char_spans("3:9:PRO;10:12:NON").size() == 2);
  CHECK(parse_char_spans("").empty());
  CHECK_THROWS_AS(parse_char_spans("(9, 3, 'PRO')"), ValidationError);
}

TEST_CASE("TSV import maps char spans to fully covered tokens") {
  std::stringstream tsv;
  tsv << "sentence_hash\ttopic\tsentence\tmerged_segments\n"
      << "h1\tschool uniforms\t" << kText << "\t[(17, 62, 'PRO')]\n"
      << "h2\tT2\tCloning is risky .\t\n";
  const auto result = import_tsv(tsv, TsvImportConfig{});
  REQUIRE(result.corpus.size() == 2);

  // Offset oracle: a token is inside [17, 62) iff begin >= 17 and end <= 62.
  const auto& s = result.corpus[0];
  const auto offsets = token_offsets(kText, s.tokens);
  Labels expected;
  for (auto [b, e] : offsets) expected.push_back(b >= 17 && e <= 62 ? P : N);
  CHECK(s.labels == expected);
  // "create" .. "among" are inside; "uniforms" and "students" are cut.
  CHECK(s.labels == Labels{N, N, N, N, P, P, P, P, P, P, P, N, N, N, N, N});
  CHECK(result.warnings.size() == 2);
  CHECK(s.topic.id == "T8");

  CHECK(result.corpus[1].labels == Labels{N, N, N, N});
}

TEST_CASE("TSV import with config, token column and split file") {
  const auto dir = std::filesystem::temp_directory_path() / "aurc_tsv_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream splits(dir / "splits.tsv");
    splits << "id\tIn-Domain\tCross-Domain\n" << "a\tTrain\tTrain\n" << "b\tNone\tTest\n";
  }
  std::stringstream cfg_text(
      "# released layout variant\n"
      "delimiter=tab\n"
      "id_column=id\n"
      "topic_column=topic\n"
      "text_column=text\n"
      "tokens_column=tokens\n"
      "spans_column=spans\n"
      "splits_file=splits.tsv\n"
      "splits_id_column=id\n"
      "split_in_domain_column=In-Domain\n"
      "split_cross_domain_column=Cross-Domain\n");
  const auto cfg = parse_tsv_config(cfg_text, dir);
  std::stringstream tsv;
  tsv << "id\ttopic\ttext\ttokens\tspans\n"
      << "a\tT1\tIt's wrong.\tIt 's wrong .\t0:11:CON\n"
      << "b\tT7\tGuns kill.\tGuns kill .\t\n";
  const auto r = import_tsv(tsv, cfg);
  REQUIRE(r.corpus.size() == 2);
  CHECK(r.corpus[0].tokens == std::vector<std::string>{"It", "'s", "wrong", "."});
  CHECK(r.corpus[0].labels == Labels{C, C, C, C});
  CHECK(r.corpus[0].split_in_domain == SplitPart::Train);
  CHECK_FALSE(r.corpus[1].split_in_domain.has_value());
  CHECK(r.corpus[1].split_cross_domain == SplitPart::Test);
  std::filesystem::remove_all(dir);
}

TEST_CASE("TSV config and import errors") {
  std::stringstream bad_key("nonsense=1\n");
  CHECK_THROWS_AS(parse_tsv_config(bad_key), ValidationError);
  std::stringstream no_eq("header\n");
  CHECK_THROWS_AS(parse_tsv_config(no_eq), ValidationError);

  std::stringstream unknown_topic;
  unknown_topic << "sentence_hash\ttopic\tsentence\tmerged_segments\n"
                << "x\tvaccines\tVaccines work .\t\n";
  CHECK_THROWS_AS(import_tsv(unknown_topic, TsvImportConfig{}), ValidationError);

  std::stringstream missing_col;
  missing_col << "sentence_hash\ttopic\tsentence\n";
  CHECK_THROWS_AS(import_tsv(missing_col, TsvImportConfig{}), ValidationError);
}

TEST_CASE("predictions JSONL") {
  const auto corpus = testing::synthetic_corpus(3, 5);
  const auto preds = gold_predictions(corpus);
  std::stringstream buf;
  write_predictions_jsonl(corpus, preds, buf);
  CHECK(read_predictions_jsonl(buf) == preds);

  std::stringstream dup(R"({"sentence_id":"a","labels":["NON"]})"
                        "\n"
                        R"({"sentence_id":"a","labels":["NON"]})");
  CHECK_THROWS_AS(read_predictions_jsonl(dup), ValidationError);
}
