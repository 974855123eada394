#include "aurc/corpus_io.hpp"

#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "aurc/error.hpp"
#include "json.hpp"

namespace aurc {
namespace {

using ojson = nlohmann::ordered_json;

std::string at_line(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

std::optional<SplitPart> split_from_json(const ojson& obj, const char* key,
                                         const std::string& where) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  if (!obj[key].is_string()) {
    throw ValidationError(where + std::string(key) + " must be a string or null");
  }
  const auto value = obj[key].get<std::string>();
  if (value.empty() || value == "None") return std::nullopt;
  auto part = parse_split_part(value);
  if (!part) {
    throw ValidationError(where + "unknown " + key + " value '" + value + "'");
  }
  return part;
}

Labels labels_from_json(const ojson& arr, const std::string& where) {
  if (!arr.is_array()) throw ValidationError(where + "labels must be an array");
  Labels out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_string()) throw ValidationError(where + "label is not a string");
    auto l = parse_label(v.get<std::string>());
    if (!l) {
      throw ValidationError(where + "unknown label '" + v.get<std::string>() + "'");
    }
    out.push_back(*l);
  }
  return out;
}

ojson labels_to_json(const Labels& labels) {
  ojson arr = ojson::array();
  for (auto l : labels) arr.push_back(std::string(to_string(l)));
  return arr;
}

ojson split_to_json(const std::optional<SplitPart>& p) {
  if (!p) return nullptr;
  return std::string(to_string(*p));
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

template <typename Fn>
void for_each_json_line(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ojson obj;
    try {
      obj = ojson::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(at_line(source, lineno) + "malformed JSON: " + e.what());
    }
    if (!obj.is_object()) {
      throw ValidationError(at_line(source, lineno) + "record is not an object");
    }
    fn(obj, at_line(source, lineno));
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

char parse_char_setting(const std::string& key, const std::string& value) {
  if (value == "tab" || value == "\\t") return '\t';
  if (value == "space") return ' ';
  if (value == "comma") return ',';
  if (value.size() != 1) {
    throw ValidationError("config: " + key + " must be a single character");
  }
  return value[0];
}

// Resolves column references against a header row (or as indices).
class ColumnMap {
 public:
  ColumnMap(bool header, const std::vector<std::string>& header_row)
      : header_(header) {
    for (std::size_t i = 0; i < header_row.size(); ++i) {
      index_[trim(header_row[i])] = i;
    }
  }

  std::optional<std::size_t> resolve(const std::string& ref,
                                     bool required) const {
    if (ref.empty()) {
      if (required) throw ValidationError("config: required column not set");
      return std::nullopt;
    }
    if (header_) {
      auto it = index_.find(ref);
      if (it == index_.end()) {
        throw ValidationError("TSV header has no column '" + ref + "'");
      }
      return it->second;
    }
    try {
      return static_cast<std::size_t>(std::stoul(ref));
    } catch (const std::exception&) {
      throw ValidationError("config: column '" + ref +
                            "' must be an index when header=false");
    }
  }

 private:
  bool header_;
  std::unordered_map<std::string, std::size_t> index_;
};

const std::string& field_at(const std::vector<std::string>& fields,
                            std::size_t idx, const std::string& where) {
  if (idx >= fields.size()) {
    throw ValidationError(where + "missing column " + std::to_string(idx));
  }
  return fields[idx];
}

struct SplitAssignment {
  std::optional<SplitPart> in_domain;
  std::optional<SplitPart> cross_domain;
};

std::optional<SplitPart> parse_split_field(const std::string& raw,
                                           const std::string& where) {
  const auto v = trim(raw);
  if (v.empty() || v == "None" || v == "none" || v == "-") return std::nullopt;
  auto p = parse_split_part(v);
  if (!p) throw ValidationError(where + "unknown split value '" + v + "'");
  return p;
}

std::unordered_map<std::string, SplitAssignment> load_split_file(
    const TsvImportConfig& config) {
  std::ifstream in = open_input(*config.splits_file);
  const std::string source = config.splits_file->string();
  std::string line;
  std::vector<std::string> header_row;
  if (config.header) {
    if (!std::getline(in, line)) return {};
    if (!line.empty() && line.back() == '\r') line.pop_back();
    header_row = split_fields(line, config.delimiter);
  }
  ColumnMap cols(config.header, header_row);
  const auto id_col = *cols.resolve(config.splits_id_column, true);
  const auto in_col = cols.resolve(config.split_in_domain_column, false);
  const auto cross_col = cols.resolve(config.split_cross_domain_column, false);

  std::unordered_map<std::string, SplitAssignment> out;
  std::size_t lineno = config.header ? 1 : 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, config.delimiter);
    const auto where = at_line(source, lineno);
    SplitAssignment a;
    if (in_col) a.in_domain = parse_split_field(field_at(fields, *in_col, where), where);
    if (cross_col) {
      a.cross_domain = parse_split_field(field_at(fields, *cross_col, where), where);
    }
    out[trim(field_at(fields, id_col, where))] = a;
  }
  return out;
}

}  // namespace

Corpus read_corpus_jsonl(std::istream& in, const std::string& source) {
  Corpus corpus;
  for_each_json_line(in, source, [&](const ojson& obj, const std::string& where) {
    LabeledSentence s;
    try {
      s.sentence_id = obj.at("sentence_id").get<std::string>();
      s.topic.id = obj.at("topic_id").get<std::string>();
      if (obj.contains("topic_name")) {
        s.topic.name = obj.at("topic_name").get<std::string>();
      } else if (const Topic* t = find_topic_by_id(s.topic.id)) {
        s.topic.name = t->name;
      }
      s.tokens = obj.at("tokens").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + "malformed record: " + e.what());
    }
    if (!obj.contains("labels")) throw ValidationError(where + "missing labels");
    s.labels = labels_from_json(obj["labels"], where);
    s.split_in_domain = split_from_json(obj, "split_in_domain", where);
    s.split_cross_domain = split_from_json(obj, "split_cross_domain", where);
    try {
      validate_sentence(s);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    corpus.push_back(std::move(s));
  });
  validate_corpus(corpus);
  return corpus;
}

void write_corpus_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const auto& s : corpus) {
    ojson obj;
    obj["sentence_id"] = s.sentence_id;
    obj["topic_id"] = s.topic.id;
    obj["topic_name"] = s.topic.name;
    obj["tokens"] = s.tokens;
    obj["labels"] = labels_to_json(s.labels);
    obj["split_in_domain"] = split_to_json(s.split_in_domain);
    obj["split_cross_domain"] = split_to_json(s.split_cross_domain);
    out << obj.dump() << '\n';
  }
}

Corpus load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_corpus_jsonl(in, path.string());
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_corpus_jsonl(corpus, out);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Predictions read_predictions_jsonl(std::istream& in, const std::string& source) {
  Predictions preds;
  for_each_json_line(in, source, [&](const ojson& obj, const std::string& where) {
    std::string id;
    try {
      id = obj.at("sentence_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + "malformed record: " + e.what());
    }
    if (!obj.contains("labels")) throw ValidationError(where + "missing labels");
    auto labels = labels_from_json(obj["labels"], where);
    if (!preds.emplace(id, std::move(labels)).second) {
      throw ValidationError(where + "duplicate sentence id '" + id + "'");
    }
  });
  return preds;
}

void write_predictions_jsonl(const Corpus& order, const Predictions& preds,
                             std::ostream& out) {
  for (const auto& s : order) {
    auto it = preds.find(s.sentence_id);
    if (it == preds.end()) continue;
    ojson obj;
    obj["sentence_id"] = s.sentence_id;
    obj["labels"] = labels_to_json(it->second);
    out << obj.dump() << '\n';
  }
}

Predictions load_predictions(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_predictions_jsonl(in, path.string());
}

Predictions gold_predictions(const Corpus& corpus) {
  Predictions out;
  for (const auto& s : corpus) out.emplace(s.sentence_id, s.labels);
  return out;
}

TsvImportConfig parse_tsv_config(std::istream& in,
                                 const std::filesystem::path& base_dir) {
  TsvImportConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) +
                            ": expected key=value");
    }
    const auto key = trim(content.substr(0, eq));
    const auto value = trim(content.substr(eq + 1));
    if (key == "delimiter") {
      cfg.delimiter = parse_char_setting(key, value);
    } else if (key == "header") {
      if (value != "true" && value != "false") {
        throw ValidationError("config: header must be true or false");
      }
      cfg.header = value == "true";
    } else if (key == "id_column") {
      cfg.id_column = value;
    } else if (key == "topic_column") {
      cfg.topic_column = value;
    } else if (key == "text_column") {
      cfg.text_column = value;
    } else if (key == "tokens_column") {
      cfg.tokens_column = value;
    } else if (key == "token_separator") {
      cfg.token_separator = parse_char_setting(key, value);
    } else if (key == "spans_column") {
      cfg.spans_column = value;
    } else if (key == "split_in_domain_column") {
      cfg.split_in_domain_column = value;
    } else if (key == "split_cross_domain_column") {
      cfg.split_cross_domain_column = value;
    } else if (key == "splits_file") {
      std::filesystem::path p(value);
      cfg.splits_file = p.is_relative() ? base_dir / p : p;
    } else if (key == "splits_id_column") {
      cfg.splits_id_column = value;
    } else {
      throw ValidationError("config line " + std::to_string(lineno) +
                            ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

TsvImportConfig load_tsv_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_tsv_config(in, path.parent_path());
}

std::vector<CharSpan> parse_char_spans(const std::string& field) {
  static const std::regex kTriple(
      R"((\d+)[^0-9A-Za-z]+(\d+)[^0-9A-Za-z]+([A-Za-z]+))");
  std::vector<CharSpan> out;
  for (auto it = std::sregex_iterator(field.begin(), field.end(), kTriple);
       it != std::sregex_iterator(); ++it) {
    std::string name = (*it)[3].str();
    for (auto& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    auto label = parse_label(name);
    if (!label) {
      throw ValidationError("span '" + it->str() + "' has unknown label '" +
                            (*it)[3].str() + "'");
    }
    CharSpan span{std::stoul((*it)[1].str()), std::stoul((*it)[2].str()), *label};
    if (span.end <= span.start) {
      throw ValidationError("span '" + it->str() + "' is empty or reversed");
    }
    out.push_back(span);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> token_offsets(
    const std::string& text, const std::vector<std::string>& tokens) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(tokens.size());
  std::size_t pos = 0;
  for (const auto& tok : tokens) {
    const auto found = text.find(tok, pos);
    if (tok.empty() || found == std::string::npos) {
      throw ValidationError("token '" + tok + "' not found in text after offset " +
                            std::to_string(pos));
    }
    out.emplace_back(found, found + tok.size());
    pos = found + tok.size();
  }
  return out;
}

ImportResult import_tsv(std::istream& in, const TsvImportConfig& config,
                        const std::string& source) {
  ImportResult result;
  std::string line;
  std::vector<std::string> header_row;
  std::size_t lineno = 0;
  if (config.header) {
    if (!std::getline(in, line)) return result;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    header_row = split_fields(line, config.delimiter);
  }
  ColumnMap cols(config.header, header_row);
  const auto id_col = *cols.resolve(config.id_column, true);
  const auto topic_col = *cols.resolve(config.topic_column, true);
  const auto text_col = cols.resolve(config.text_column, false);
  const auto tokens_col = cols.resolve(config.tokens_column, false);
  const auto spans_col = *cols.resolve(config.spans_column, true);
  // With a splits file the split columns name columns of that file.
  const auto in_col = config.splits_file
                          ? std::nullopt
                          : cols.resolve(config.split_in_domain_column, false);
  const auto cross_col = config.splits_file
                             ? std::nullopt
                             : cols.resolve(config.split_cross_domain_column, false);
  if (!text_col && !tokens_col) {
    throw ValidationError("config: need text_column or tokens_column");
  }

  std::unordered_map<std::string, SplitAssignment> external_splits;
  if (config.splits_file) external_splits = load_split_file(config);

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto where = at_line(source, lineno);
    const auto fields = split_fields(line, config.delimiter);

    LabeledSentence s;
    s.sentence_id = trim(field_at(fields, id_col, where));
    const auto topic_ref = trim(field_at(fields, topic_col, where));
    const Topic* topic = find_topic_by_id(topic_ref);
    if (topic == nullptr) topic = find_topic_by_name(topic_ref);
    if (topic == nullptr) {
      throw ValidationError(where + "unknown topic '" + topic_ref + "'");
    }
    s.topic = *topic;

    std::string text;
    if (tokens_col) {
      for (auto& tok : split_fields(field_at(fields, *tokens_col, where),
                                    config.token_separator)) {
        if (!tok.empty()) s.tokens.push_back(std::move(tok));
      }
      if (text_col) {
        text = field_at(fields, *text_col, where);
      } else {
        for (std::size_t i = 0; i < s.tokens.size(); ++i) {
          if (i) text += ' ';
          text += s.tokens[i];
        }
      }
    } else {
      text = field_at(fields, *text_col, where);
      std::istringstream words(text);
      for (std::string w; words >> w;) s.tokens.push_back(w);
    }
    if (s.tokens.empty()) throw ValidationError(where + "no tokens");

    std::vector<std::pair<std::size_t, std::size_t>> offsets;
    try {
      offsets = token_offsets(text, s.tokens);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }

    std::vector<CharSpan> spans;
    try {
      spans = parse_char_spans(field_at(fields, spans_col, where));
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    s.labels.assign(s.tokens.size(), StanceLabel::Non);
    for (const auto& span : spans) {
      if (!is_argumentative(span.label)) continue;
      for (std::size_t t = 0; t < offsets.size(); ++t) {
        const auto [b, e] = offsets[t];
        const bool inside = b >= span.start && e <= span.end;
        const bool touches = b < span.end && e > span.start;
        if (inside) {
          if (s.labels[t] != StanceLabel::Non && s.labels[t] != span.label) {
            throw ValidationError(where + "token " + std::to_string(t) +
                                  " covered by conflicting spans");
          }
          s.labels[t] = span.label;
        } else if (touches) {
          result.warnings.push_back(
              where + "sentence '" + s.sentence_id + "': token " +
              std::to_string(t) + " '" + s.tokens[t] +
              "' only partially inside span [" + std::to_string(span.start) +
              "," + std::to_string(span.end) + "); left NON");
        }
      }
    }

    if (in_col) s.split_in_domain = parse_split_field(field_at(fields, *in_col, where), where);
    if (cross_col) {
      s.split_cross_domain = parse_split_field(field_at(fields, *cross_col, where), where);
    }
    if (auto it = external_splits.find(s.sentence_id); it != external_splits.end()) {
      s.split_in_domain = it->second.in_domain;
      s.split_cross_domain = it->second.cross_domain;
    }
    result.corpus.push_back(std::move(s));
  }
  validate_corpus(result.corpus);
  return result;
}

ImportResult import_tsv(const std::filesystem::path& path,
                        const TsvImportConfig& config) {
  auto in = open_input(path);
  return import_tsv(in, config, path.string());
}

}  // namespace aurc
