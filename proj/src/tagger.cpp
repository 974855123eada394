#include "aurc/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "aurc/error.hpp"
#include "aurc/random.hpp"
#include "json.hpp"

namespace aurc {
namespace {

constexpr int kModelVersion = 1;
constexpr std::size_t kPositionBuckets = 5;

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Byte offsets of UTF-8 code point starts, plus s.size().
std::vector<std::size_t> code_points(std::string_view s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) out.push_back(i);
  }
  out.push_back(s.size());
  return out;
}

std::vector<std::string> topic_words(const Topic& topic) {
  std::vector<std::string> out;
  std::istringstream in(ascii_lower(topic.name));
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string neighbor(std::span<const std::string> tokens, std::ptrdiff_t i) {
  if (i < 0) return "<s>";
  if (i >= static_cast<std::ptrdiff_t>(tokens.size())) return "</s>";
  return ascii_lower(tokens[static_cast<std::size_t>(i)]);
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

std::string word_shape(std::string_view token) {
  std::string out;
  for (std::size_t i = 0; i < token.size(); ++i) {
    const auto c = static_cast<unsigned char>(token[i]);
    char cls;
    if (c >= 'A' && c <= 'Z') {
      cls = 'X';
    } else if (c >= 'a' && c <= 'z') {
      cls = 'x';
    } else if (c >= '0' && c <= '9') {
      cls = 'd';
    } else if (c >= 0x80) {
      if ((c & 0xC0) == 0x80) continue;  // continuation byte
      cls = 'u';
    } else {
      cls = static_cast<char>(c);
    }
    if (out.empty() || out.back() != cls) out += cls;
  }
  return out;
}

std::vector<FeatureVector> featurize(std::span<const std::string> tokens, const Topic& topic) {
  const auto topic_vocab = topic_words(topic);
  const std::string topic_tag = "topic=" + topic.id;
  std::vector<FeatureVector> out(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto& f = out[i];
    const auto word = ascii_lower(tokens[i]);
    const auto cps = code_points(word);
    const std::size_t len = cps.size() - 1;
    const auto pos = static_cast<std::ptrdiff_t>(i);
    const bool in_topic =
        std::find(topic_vocab.begin(), topic_vocab.end(), word) != topic_vocab.end();
    const std::string in_topic_feat = in_topic ? "intopic=1" : "intopic=0";

    f.push_back("bias");
    f.push_back("w=" + word);
    for (std::size_t k = 1; k <= 3 && k <= len; ++k) {
      f.push_back("p" + std::to_string(k) + "=" + word.substr(0, cps[k]));
    }
    for (std::size_t k = 1; k <= 3 && k <= len; ++k) {
      f.push_back("s" + std::to_string(k) + "=" + word.substr(cps[len - k]));
    }
    f.push_back("shape=" + word_shape(tokens[i]));
    f.push_back("w-2=" + neighbor(tokens, pos - 2));
    f.push_back("w-1=" + neighbor(tokens, pos - 1));
    f.push_back("w+1=" + neighbor(tokens, pos + 1));
    f.push_back("w+2=" + neighbor(tokens, pos + 2));
    f.push_back("pos=" + std::to_string(i * kPositionBuckets / tokens.size()));
    f.push_back(in_topic_feat);
    f.push_back(topic_tag);
    f.push_back(topic_tag + "|w=" + word);
    f.push_back(topic_tag + "|" + in_topic_feat);
  }
  return out;
}

Labels viterbi(const EmissionScores& emissions, const LabelMatrix& transitions,
               const LabelVector& start, const LabelVector& end) {
  const std::size_t n = emissions.size();
  if (n == 0) return {};
  // best[t][y]: best score of positions t+1..n-1 plus end, given y at t.
  std::vector<LabelVector> best(n);
  best[n - 1] = end;
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t y = 0; y < kNumLabels; ++y) {
      double m = kNegInf;
      for (std::size_t z = 0; z < kNumLabels; ++z) {
        m = std::max(m, transitions[y][z] + emissions[t + 1][z] + best[t + 1][z]);
      }
      best[t][y] = m;
    }
  }
  // Forward pass taking the first label that attains the optimum keeps the
  // result lexicographically smallest among ties.
  Labels out(n);
  std::size_t prev = 0;
  for (std::size_t t = 0; t < n; ++t) {
    double m = kNegInf;
    std::size_t arg = 0;
    for (std::size_t y = 0; y < kNumLabels; ++y) {
      const double head = t == 0 ? start[y] : transitions[prev][y];
      const double v = head + emissions[t][y] + best[t][y];
      if (v > m) {
        m = v;
        arg = y;
      }
    }
    out[t] = kAllLabels[arg];
    prev = arg;
  }
  return out;
}

double sequence_score(const EmissionScores& emissions, const LabelMatrix& transitions,
                      const LabelVector& start, const LabelVector& end,
                      std::span<const StanceLabel> labels) {
  if (labels.size() != emissions.size()) {
    throw ValidationError("sequence_score: length mismatch");
  }
  if (labels.empty()) return 0.0;
  double score = start[index_of(labels[0])];
  for (std::size_t t = 0; t < labels.size(); ++t) {
    score += emissions[t][index_of(labels[t])];
    if (t > 0) score += transitions[index_of(labels[t - 1])][index_of(labels[t])];
  }
  return score + end[index_of(labels.back())];
}

std::uint32_t TaggerModel::add_feature(const std::string& name) {
  auto [it, fresh] = index_.emplace(name, static_cast<std::uint32_t>(names_.size()));
  if (fresh) {
    names_.push_back(name);
    emissions_.push_back({});
  }
  return it->second;
}

std::int64_t TaggerModel::feature_id(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

EmissionScores TaggerModel::emission_scores(std::span<const std::string> tokens,
                                            const Topic& topic) const {
  const auto feats = featurize(tokens, topic);
  EmissionScores out(tokens.size(), LabelVector{});
  for (std::size_t t = 0; t < feats.size(); ++t) {
    for (const auto& name : feats[t]) {
      auto it = index_.find(name);
      if (it == index_.end()) continue;
      const auto& w = emissions_[it->second];
      for (std::size_t y = 0; y < kNumLabels; ++y) out[t][y] += w[y];
    }
  }
  return out;
}

namespace {

// Running and accumulated weights for the averaged perceptron.
struct AveragedWeights {
  std::vector<LabelVector> emit;
  std::vector<LabelVector> emit_acc;
  LabelMatrix trans{};
  LabelMatrix trans_acc{};
  LabelVector start{};
  LabelVector start_acc{};
  LabelVector end{};
  LabelVector end_acc{};
  double step = 1.0;

  void bump(LabelVector& w, LabelVector& acc, std::size_t y, double delta) {
    w[y] += delta;
    acc[y] += step * delta;
  }
  void bump(LabelMatrix& w, LabelMatrix& acc, std::size_t a, std::size_t b, double delta) {
    w[a][b] += delta;
    acc[a][b] += step * delta;
  }

  void update(const std::vector<std::vector<std::uint32_t>>& feats,
              std::span<const StanceLabel> labels, double delta) {
    for (std::size_t t = 0; t < labels.size(); ++t) {
      const auto y = index_of(labels[t]);
      for (auto f : feats[t]) bump(emit[f], emit_acc[f], y, delta);
      if (t > 0) bump(trans, trans_acc, index_of(labels[t - 1]), y, delta);
    }
    bump(start, start_acc, index_of(labels.front()), delta);
    bump(end, end_acc, index_of(labels.back()), delta);
  }

  EmissionScores scores(const std::vector<std::vector<std::uint32_t>>& feats) const {
    EmissionScores out(feats.size(), LabelVector{});
    for (std::size_t t = 0; t < feats.size(); ++t) {
      for (auto f : feats[t]) {
        for (std::size_t y = 0; y < kNumLabels; ++y) out[t][y] += emit[f][y];
      }
    }
    return out;
  }
};

double averaged(double w, double acc, double step) { return w - acc / step; }

}  // namespace

TaggerModel train(const Corpus& training, const TrainOptions& options) {
  if (training.empty()) throw ValidationError("train: empty training set");
  TaggerModel model;
  std::vector<std::vector<std::vector<std::uint32_t>>> feats;
  feats.reserve(training.size());
  for (const auto& s : training) {
    validate_sentence(s);
    auto& per_token = feats.emplace_back();
    for (const auto& fv : featurize(s.tokens, s.topic)) {
      auto& ids = per_token.emplace_back();
      for (const auto& name : fv) ids.push_back(model.add_feature(name));
    }
  }

  AveragedWeights w;
  w.emit.assign(model.num_features(), LabelVector{});
  w.emit_acc.assign(model.num_features(), LabelVector{});

  auto& info = model.info();
  info.epochs = options.epochs;
  info.seed = options.seed;
  std::vector<std::size_t> order(training.size());
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(options.seed, "epoch:" + std::to_string(epoch)));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    std::size_t mistakes = 0;
    for (auto idx : order) {
      const auto& gold = training[idx].labels;
      const auto pred = viterbi(w.scores(feats[idx]), w.trans, w.start, w.end);
      if (pred != gold) {
        ++mistakes;
        w.update(feats[idx], gold, +1.0);
        w.update(feats[idx], pred, -1.0);
      }
      w.step += 1.0;
    }
    info.mistakes.push_back(mistakes);
    info.epochs_run = epoch + 1;
    if (mistakes == 0) break;
  }

  for (std::size_t f = 0; f < model.num_features(); ++f) {
    for (std::size_t y = 0; y < kNumLabels; ++y) {
      model.emission(f)[y] = averaged(w.emit[f][y], w.emit_acc[f][y], w.step);
    }
  }
  for (std::size_t a = 0; a < kNumLabels; ++a) {
    for (std::size_t b = 0; b < kNumLabels; ++b) {
      model.transitions()[a][b] = averaged(w.trans[a][b], w.trans_acc[a][b], w.step);
    }
    model.start()[a] = averaged(w.start[a], w.start_acc[a], w.step);
    model.end()[a] = averaged(w.end[a], w.end_acc[a], w.step);
  }
  return model;
}

Labels decode(const TaggerModel& model, std::span<const std::string> tokens, const Topic& topic) {
  return viterbi(model.emission_scores(tokens, topic), model.transitions(), model.start(),
                 model.end());
}

Labels majority_baseline(std::size_t length) { return Labels(length, StanceLabel::Non); }

TokenPredictor majority_predictor() {
  return [](std::span<const std::string> tokens, const Topic&) {
    return majority_baseline(tokens.size());
  };
}

TokenPredictor model_predictor(const TaggerModel& model) {
  return [&model](std::span<const std::string> tokens, const Topic& topic) {
    return decode(model, tokens, topic);
  };
}

Predictions predict_corpus(const TokenPredictor& predictor, const Corpus& corpus,
                           PredictionLevel level, std::uint64_t tie_seed) {
  Predictions out;
  for (const auto& s : corpus) {
    auto labels = predictor(s.tokens, s.topic);
    if (labels.size() != s.tokens.size()) {
      throw ValidationError("predictor returned " + std::to_string(labels.size()) +
                            " labels for sentence '" + s.sentence_id + "'");
    }
    if (level == PredictionLevel::Sentence) {
      const auto label = sentence_label(labels, sentence_tie_seed(tie_seed, s.sentence_id));
      std::fill(labels.begin(), labels.end(), label);
    }
    out.emplace(s.sentence_id, std::move(labels));
  }
  return out;
}

namespace {

nlohmann::ordered_json vector_json(const LabelVector& v) {
  return nlohmann::ordered_json::array({v[0], v[1], v[2]});
}

LabelVector vector_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != kNumLabels) {
    throw ValidationError("model: expected an array of " + std::to_string(kNumLabels) + " weights");
  }
  LabelVector v{};
  for (std::size_t i = 0; i < kNumLabels; ++i) v[i] = j[i].get<double>();
  return v;
}

bool all_zero(const LabelVector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

void write_model(const TaggerModel& model, std::ostream& out) {
  nlohmann::ordered_json j;
  j["format"] = "aurc-tagger";
  j["version"] = kModelVersion;
  j["labels"] = {"PRO", "CON", "NON"};
  const auto& info = model.info();
  j["training"] = {{"epochs", info.epochs},
                   {"epochs_run", info.epochs_run},
                   {"seed", info.seed},
                   {"mistakes", info.mistakes}};
  j["start"] = vector_json(model.start());
  j["end"] = vector_json(model.end());
  auto trans = nlohmann::ordered_json::array();
  for (const auto& row : model.transitions()) trans.push_back(vector_json(row));
  j["transitions"] = trans;
  auto features = nlohmann::ordered_json::array();
  auto emissions = nlohmann::ordered_json::array();
  for (std::size_t f = 0; f < model.num_features(); ++f) {
    if (all_zero(model.emission(f))) continue;
    features.push_back(model.feature_name(f));
    emissions.push_back(vector_json(model.emission(f)));
  }
  j["features"] = std::move(features);
  j["emissions"] = std::move(emissions);
  out << j.dump() << '\n';
}

TaggerModel read_model(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("model: malformed JSON: ") + e.what());
  }
  TaggerModel model;
  try {
    if (j.at("format") != "aurc-tagger") throw ValidationError("model: not an aurc-tagger file");
    if (j.at("version").get<int>() != kModelVersion) {
      throw ValidationError("model: unsupported version " + j.at("version").dump());
    }
    if (j.at("labels") != nlohmann::json({"PRO", "CON", "NON"})) {
      throw ValidationError("model: unexpected label set");
    }
    const auto& t = j.at("training");
    model.info().epochs = t.at("epochs").get<std::size_t>();
    model.info().epochs_run = t.at("epochs_run").get<std::size_t>();
    model.info().seed = t.at("seed").get<std::uint64_t>();
    model.info().mistakes = t.at("mistakes").get<std::vector<std::size_t>>();
    model.start() = vector_from(j.at("start"));
    model.end() = vector_from(j.at("end"));
    const auto& trans = j.at("transitions");
    if (!trans.is_array() || trans.size() != kNumLabels) {
      throw ValidationError("model: transitions must be 3x3");
    }
    for (std::size_t a = 0; a < kNumLabels; ++a) model.transitions()[a] = vector_from(trans[a]);
    const auto& features = j.at("features");
    const auto& emissions = j.at("emissions");
    if (features.size() != emissions.size()) {
      throw ValidationError("model: features and emissions differ in length");
    }
    for (std::size_t f = 0; f < features.size(); ++f) {
      const auto id = model.add_feature(features[f].get<std::string>());
      if (id != f) throw ValidationError("model: duplicate feature " + features[f].dump());
      model.emission(id) = vector_from(emissions[f]);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model: malformed field: ") + e.what());
  }
  return model;
}

void save_model(const TaggerModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_model(model, out);
}

TaggerModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_model(in);
}

}  // namespace aurc
