#include "aurc/window.hpp"

#include <array>
#include <map>

#include "aurc/error.hpp"
#include "aurc/random.hpp"

namespace aurc {

void validate_window_config(const WindowConfig& config) {
  if (config.size == 0) throw ValidationError("window size must be at least 1");
  if (config.stride == 0) throw ValidationError("window stride must be at least 1");
  if (config.stride > config.size) {
    throw ValidationError("window stride " + std::to_string(config.stride) +
                          " exceeds size " + std::to_string(config.size) +
                          "; tokens between windows would be skipped");
  }
}

TokenStream build_stream(const Corpus& corpus, const std::string& topic_id) {
  TokenStream stream;
  for (const auto& s : corpus) {
    if (s.topic.id != topic_id) continue;
    stream.topic = s.topic;
    stream.offsets.push_back(stream.tokens.size());
    stream.sentence_ids.push_back(s.sentence_id);
    stream.tokens.insert(stream.tokens.end(), s.tokens.begin(), s.tokens.end());
    stream.gold.insert(stream.gold.end(), s.labels.begin(), s.labels.end());
  }
  if (stream.offsets.empty()) {
    throw ValidationError("build_stream: no sentences for topic '" + topic_id + "'");
  }
  return stream;
}

std::vector<Window> windows(std::size_t stream_length, const WindowConfig& config) {
  validate_window_config(config);
  std::vector<Window> out;
  if (stream_length == 0) return out;
  for (std::size_t start = 0;; start += config.stride) {
    const auto end = std::min(start + config.size, stream_length);
    out.push_back({start, end});
    if (end == stream_length) break;
  }
  return out;
}

WindowPredictor window_predictor(TokenPredictor predictor) {
  return [predictor = std::move(predictor)](const TokenStream& stream, const Window& w) {
    const std::span<const std::string> tokens(stream.tokens.data() + w.start, w.end - w.start);
    return predictor(tokens, stream.topic);
  };
}

Labels windowed_predict(const WindowPredictor& predictor, const TokenStream& stream,
                        const WindowConfig& config) {
  std::vector<std::array<std::uint32_t, kNumLabels>> votes(stream.tokens.size());
  for (const auto& w : windows(stream.tokens.size(), config)) {
    const auto labels = predictor(stream, w);
    if (labels.size() != w.end - w.start) {
      throw ValidationError("window predictor returned " + std::to_string(labels.size()) +
                            " labels for a window of " + std::to_string(w.end - w.start));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) ++votes[w.start + i][index_of(labels[i])];
  }
  Labels out(stream.tokens.size(), StanceLabel::Non);
  for (std::size_t t = 0; t < votes.size(); ++t) {
    std::uint32_t best = 0;
    std::size_t n_best = 0;
    for (auto l : kAllLabels) {
      const auto c = votes[t][index_of(l)];
      if (c > best) {
        best = c;
        n_best = 1;
        out[t] = l;
      } else if (c == best) {
        ++n_best;
      }
    }
    if (n_best != 1) out[t] = StanceLabel::Non;
  }
  return out;
}

Predictions unstream(const TokenStream& stream, const Labels& labels) {
  if (labels.size() != stream.tokens.size()) {
    throw ValidationError("unstream: label count does not match stream length");
  }
  Predictions out;
  for (std::size_t i = 0; i < stream.offsets.size(); ++i) {
    const auto begin = stream.offsets[i];
    const auto end = i + 1 < stream.offsets.size() ? stream.offsets[i + 1] : labels.size();
    out.emplace(stream.sentence_ids[i],
                Labels(labels.begin() + static_cast<std::ptrdiff_t>(begin),
                       labels.begin() + static_cast<std::ptrdiff_t>(end)));
  }
  return out;
}

BoundaryFreeReport boundary_free_eval(const WindowPredictor& predictor, const Corpus& subset,
                                      const BoundaryFreeOptions& options) {
  validate_window_config(options.window);
  std::map<std::string, Corpus> by_topic;
  for (const auto& s : subset) by_topic[s.topic.id].push_back(s);

  Predictions preds;
  for (auto& [topic_id, sentences] : by_topic) {
    if (options.shuffle_seed) {
      Rng rng(derive_seed(*options.shuffle_seed, topic_id));
      for (std::size_t i = sentences.size(); i > 1; --i) {
        std::swap(sentences[i - 1], sentences[rng.below(i)]);
      }
    }
    const auto stream = build_stream(sentences, topic_id);
    preds.merge(unstream(stream, windowed_predict(predictor, stream, options.window)));
  }
  return {token_f1(subset, preds, options.classes),
          segment_f1(subset, preds, options.classes),
          sentence_f1(subset, preds, options.tie_seed, options.classes)};
}

}  // namespace aurc
