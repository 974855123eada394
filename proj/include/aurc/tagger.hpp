#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "aurc/corpus.hpp"
#include "aurc/corpus_io.hpp"
#include "aurc/labels.hpp"
#include "aurc/metrics.hpp"

namespace aurc {

// Feature strings active at one token position.
using FeatureVector = std::vector<std::string>;

/// Deterministic features from tokens, position and topic only:
/// bias, lowercased word, prefixes/suffixes of length 1-3, word shape,
/// words in a +-2 window, a relative position quintile, whether the word
/// occurs in the topic name, and topic-id conjunctions.
std::vector<FeatureVector> featurize(std::span<const std::string> tokens, const Topic& topic);

// Condensed character classes: "Energy" -> "Xx", "CO2" -> "Xd", "1,000" -> "d,d".
std::string word_shape(std::string_view token);

using LabelMatrix = std::array<std::array<double, kNumLabels>, kNumLabels>;
using LabelVector = std::array<double, kNumLabels>;
// Per-position emission scores, indexed [position][label].
using EmissionScores = std::vector<LabelVector>;

/// Exact argmax of start[y0] + sum emissions[t][yt] + sum trans[yt-1][yt] +
/// end[yn-1]. Among optimal sequences the lexicographically smallest under
/// PRO < CON < NON is returned. -infinity transitions forbid a bigram.
Labels viterbi(const EmissionScores& emissions, const LabelMatrix& transitions,
               const LabelVector& start, const LabelVector& end);

/// Total score of one label sequence under the same model.
double sequence_score(const EmissionScores& emissions, const LabelMatrix& transitions,
                      const LabelVector& start, const LabelVector& end,
                      std::span<const StanceLabel> labels);

struct TrainingInfo {
  std::size_t epochs = 0;      // requested
  std::size_t epochs_run = 0;  // stops early once an epoch makes no mistakes
  std::uint64_t seed = 0;
  std::vector<std::size_t> mistakes;  // mistaken sentences per epoch

  friend bool operator==(const TrainingInfo&, const TrainingInfo&) = default;
};

class TaggerModel {
 public:
  TaggerModel() = default;

  // Adds a feature with zero weights (no-op if known); returns its id.
  std::uint32_t add_feature(const std::string& name);
  // -1 when unknown.
  std::int64_t feature_id(const std::string& name) const;
  std::size_t num_features() const noexcept { return names_.size(); }
  const std::string& feature_name(std::size_t id) const { return names_.at(id); }

  LabelVector& emission(std::size_t feature) { return emissions_.at(feature); }
  const LabelVector& emission(std::size_t feature) const { return emissions_.at(feature); }
  LabelMatrix& transitions() noexcept { return transitions_; }
  const LabelMatrix& transitions() const noexcept { return transitions_; }
  LabelVector& start() noexcept { return start_; }
  const LabelVector& start() const noexcept { return start_; }
  LabelVector& end() noexcept { return end_; }
  const LabelVector& end() const noexcept { return end_; }
  TrainingInfo& info() noexcept { return info_; }
  const TrainingInfo& info() const noexcept { return info_; }

  EmissionScores emission_scores(std::span<const std::string> tokens, const Topic& topic) const;

  friend bool operator==(const TaggerModel&, const TaggerModel&) = default;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<LabelVector> emissions_;
  LabelMatrix transitions_{};
  LabelVector start_{};
  LabelVector end_{};
  TrainingInfo info_;
};

struct TrainOptions {
  std::size_t epochs = 10;
  std::uint64_t seed = 0;
};

/// Averaged structured perceptron over emission and transition weights,
/// decoding with viterbi. Sentence order is reshuffled every epoch from
/// `seed`; results are bit-identical for equal inputs. Throws
/// ValidationError on an empty training set.
TaggerModel train(const Corpus& training, const TrainOptions& options);

Labels decode(const TaggerModel& model, std::span<const std::string> tokens, const Topic& topic);

/// All-NON labels.
Labels majority_baseline(std::size_t length);

using TokenPredictor = std::function<Labels(std::span<const std::string>, const Topic&)>;

TokenPredictor majority_predictor();
// The model must outlive the predictor.
TokenPredictor model_predictor(const TaggerModel& model);

enum class PredictionLevel { Token, Sentence };

/// Token level: the predictor's sequences as is. Sentence level: each
/// sequence collapsed with sentence_label and broadcast to every token.
Predictions predict_corpus(const TokenPredictor& predictor, const Corpus& corpus,
                           PredictionLevel level, std::uint64_t tie_seed = kDefaultTieSeed);

// JSON model file with embedded feature vocabulary. Features whose weights
// are all zero are dropped on save.
void write_model(const TaggerModel& model, std::ostream& out);
TaggerModel read_model(std::istream& in);
void save_model(const TaggerModel& model, const std::filesystem::path& path);
TaggerModel load_model(const std::filesystem::path& path);

}  // namespace aurc
