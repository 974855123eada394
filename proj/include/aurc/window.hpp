#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aurc/corpus.hpp"
#include "aurc/corpus_io.hpp"
#include "aurc/metrics.hpp"
#include "aurc/tagger.hpp"

namespace aurc {

// All sentences of one topic concatenated in corpus order.
struct TokenStream {
  Topic topic;
  std::vector<std::string> tokens;
  Labels gold;
  std::vector<std::size_t> offsets;  // start of each sentence; first is 0
  std::vector<std::string> sentence_ids;
};

struct WindowConfig {
  std::size_t size = 45;
  std::size_t stride = 1;
};

// [start, end) into the stream.
struct Window {
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const Window&, const Window&) = default;
};

/// Throws ValidationError for size or stride 0, or stride > size (which
/// would leave tokens uncovered).
void validate_window_config(const WindowConfig& config);

/// Throws ValidationError if no sentence of `topic_id` is present.
TokenStream build_stream(const Corpus& corpus, const std::string& topic_id);

/// Windows start at 0, stride, 2*stride, ... and stop with the first window
/// that reaches the end of the stream; that window is clipped to the end.
std::vector<Window> windows(std::size_t stream_length, const WindowConfig& config);

// Predicts labels for one window of a stream.
using WindowPredictor = std::function<Labels(const TokenStream&, const Window&)>;

/// Runs a token predictor on the window's tokens with the stream's topic.
WindowPredictor window_predictor(TokenPredictor predictor);

/// Every window is predicted independently; each token gets the plurality
/// label over the windows covering it, ties resolving to NON.
Labels windowed_predict(const WindowPredictor& predictor, const TokenStream& stream,
                        const WindowConfig& config);

/// Splits stream-level labels back into per-sentence predictions.
Predictions unstream(const TokenStream& stream, const Labels& labels);

struct BoundaryFreeReport {
  EvalReport token;
  EvalReport segment;
  EvalReport sentence;
};

struct BoundaryFreeOptions {
  WindowConfig window;
  ClassSet classes = ClassSet::Three;
  std::uint64_t tie_seed = kDefaultTieSeed;
  // Shuffles sentence order within each topic before concatenation.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Streams each topic of `subset`, predicts with windowed_predict, maps the
/// labels back to sentences and scores all three measures.
BoundaryFreeReport boundary_free_eval(const WindowPredictor& predictor, const Corpus& subset,
                                      const BoundaryFreeOptions& options = {});

}  // namespace aurc
