#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aurc/corpus.hpp"

namespace aurc {

// Canonical JSONL: one object per sentence with fields sentence_id,
// topic_id, topic_name, tokens, labels, split_in_domain, split_cross_domain
// (the split fields are "Train" | "Dev" | "Test" | null).
Corpus read_corpus_jsonl(std::istream& in, const std::string& source = "<stream>");
void write_corpus_jsonl(const Corpus& corpus, std::ostream& out);

Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Predicted label sequences keyed by sentence id. The JSONL form needs only
// sentence_id and labels per line, so canonical corpus files also parse.
using Predictions = std::map<std::string, Labels>;

Predictions read_predictions_jsonl(std::istream& in,
                                   const std::string& source = "<stream>");
void write_predictions_jsonl(const Corpus& order, const Predictions& preds,
                             std::ostream& out);
Predictions load_predictions(const std::filesystem::path& path);

Predictions gold_predictions(const Corpus& corpus);

// TSV import. Column references are header names when `header` is true,
// otherwise zero-based indices.
struct TsvImportConfig {
  char delimiter = '\t';
  bool header = true;
  std::string id_column = "sentence_hash";
  std::string topic_column = "topic";  // topic name or id
  std::string text_column = "sentence";
  // Optional pre-tokenized column; tokens are separated by token_separator.
  // When empty, the text is split on whitespace.
  std::string tokens_column;
  char token_separator = ' ';
  // Character spans, any layout containing (start, end, label) triples,
  // e.g. "[(0, 52, 'PRO'), (60, 90, 'CON')]" or "0:52:PRO;60:90:CON".
  std::string spans_column = "merged_segments";
  std::string split_in_domain_column;
  std::string split_cross_domain_column;
  // Optional second TSV holding split assignments, joined on splits_id_column.
  std::optional<std::filesystem::path> splits_file;
  std::string splits_id_column = "sentence_hash";
};

/// Parses `key=value` lines ('#' comments allowed). Relative splits_file
/// paths resolve against `base_dir`.
TsvImportConfig parse_tsv_config(std::istream& in,
                                 const std::filesystem::path& base_dir = {});
TsvImportConfig load_tsv_config(const std::filesystem::path& path);

struct ImportResult {
  Corpus corpus;
  std::vector<std::string> warnings;
};

// A token receives a span's label only when it lies fully inside the span;
// partially covered tokens stay NON and produce a warning.
ImportResult import_tsv(std::istream& in, const TsvImportConfig& config,
                        const std::string& source = "<stream>");
ImportResult import_tsv(const std::filesystem::path& path,
                        const TsvImportConfig& config);

struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  StanceLabel label = StanceLabel::Non;
};

std::vector<CharSpan> parse_char_spans(const std::string& field);

// Character offsets [begin, end) of each token inside `text`, found by
// scanning left to right. Throws ValidationError if a token is missing.
std::vector<std::pair<std::size_t, std::size_t>> token_offsets(
    const std::string& text, const std::vector<std::string>& tokens);

}  // namespace aurc
