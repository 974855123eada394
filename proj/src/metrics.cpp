#include "aurc/metrics.hpp"

#include <algorithm>
#include <array>

#include "aurc/error.hpp"
#include "aurc/random.hpp"

namespace aurc {
namespace {

struct ClassSpec {
  std::string name;
  StanceLabel label;
};

std::vector<ClassSpec> class_specs(ClassSet classes) {
  if (classes == ClassSet::Two) {
    return {{"ARG", StanceLabel::Pro}, {"NON", StanceLabel::Non}};
  }
  return {{"PRO", StanceLabel::Pro}, {"CON", StanceLabel::Con}, {"NON", StanceLabel::Non}};
}

Labels view_for(std::span<const StanceLabel> labels, ClassSet classes) {
  if (classes == ClassSet::Two) return merge_argumentative(labels);
  return Labels(labels.begin(), labels.end());
}

struct Tally {
  std::array<std::size_t, kNumLabels> tp{};
  std::array<std::size_t, kNumLabels> pred{};
  std::array<std::size_t, kNumLabels> gold{};

  void add(StanceLabel g, StanceLabel p) {
    ++gold[index_of(g)];
    ++pred[index_of(p)];
    if (g == p) ++tp[index_of(g)];
  }
};

EvalReport report_from_tally(Measure measure, ClassSet classes, const Tally& t,
                             std::size_t n_sentences) {
  EvalReport r;
  r.measure = measure;
  r.class_set = classes;
  r.n_sentences = n_sentences;
  double sum = 0.0;
  for (const auto& spec : class_specs(classes)) {
    const auto i = index_of(spec.label);
    r.classes.push_back(score_class(spec.name, t.tp[i], t.pred[i], t.gold[i]));
    sum += r.classes.back().f1;
  }
  r.macro_f1 = sum / static_cast<double>(r.classes.size());
  return r;
}

}  // namespace

std::string_view to_string(Measure m) noexcept {
  switch (m) {
    case Measure::Token:
      return "token";
    case Measure::Segment:
      return "segment";
    case Measure::Sentence:
      return "sentence";
  }
  return "token";
}

std::optional<Measure> parse_measure(std::string_view s) noexcept {
  if (s == "token") return Measure::Token;
  if (s == "segment") return Measure::Segment;
  if (s == "sentence") return Measure::Sentence;
  return std::nullopt;
}

ClassScores score_class(std::string name, std::size_t tp, std::size_t predicted,
                        std::size_t gold) {
  ClassScores c;
  c.name = std::move(name);
  c.true_positives = tp;
  c.predicted = predicted;
  c.support = gold;
  c.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
  c.recall = gold == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold);
  const double denom = c.precision + c.recall;
  c.f1 = denom == 0.0 ? 0.0 : 2.0 * c.precision * c.recall / denom;
  return c;
}

Labels merge_argumentative(std::span<const StanceLabel> labels) {
  Labels out;
  out.reserve(labels.size());
  for (auto l : labels) out.push_back(is_argumentative(l) ? StanceLabel::Pro : StanceLabel::Non);
  return out;
}

void check_predictions(const Corpus& gold, const Predictions& preds) {
  for (const auto& s : gold) {
    auto it = preds.find(s.sentence_id);
    if (it == preds.end()) {
      throw ValidationError("no prediction for sentence '" + s.sentence_id + "'");
    }
    if (it->second.size() != s.labels.size()) {
      throw ValidationError("prediction for sentence '" + s.sentence_id + "' has " +
                            std::to_string(it->second.size()) + " labels, gold has " +
                            std::to_string(s.labels.size()));
    }
  }
}

EvalReport token_f1(const Corpus& gold, const Predictions& preds, ClassSet classes) {
  check_predictions(gold, preds);
  Tally tally;
  for (const auto& s : gold) {
    const auto g = view_for(s.labels, classes);
    const auto p = view_for(preds.at(s.sentence_id), classes);
    for (std::size_t t = 0; t < g.size(); ++t) tally.add(g[t], p[t]);
  }
  return report_from_tally(Measure::Token, classes, tally, gold.size());
}

double overlap_ratio(const Segment& g, const Segment& p) noexcept {
  const auto lo = std::max(g.start, p.start);
  const auto hi = std::min(g.end, p.end);
  const auto inter = hi > lo ? hi - lo : 0;
  return static_cast<double>(inter) /
         static_cast<double>(std::max(g.length(), p.length()));
}

bool segments_match(const Segment& g, const Segment& p) noexcept {
  const auto lo = std::max(g.start, p.start);
  const auto hi = std::min(g.end, p.end);
  const auto inter = hi > lo ? hi - lo : 0;
  return 2 * inter > std::max(g.length(), p.length());
}

double segment_f1_sentence(std::span<const Segment> gold,
                           std::span<const Segment> predicted) {
  const auto bound = [](std::span<const Segment> segs) {
    std::size_t n = 0;
    for (const auto& s : segs) n = std::max(n, s.end);
    return n;
  };
  validate_segments(gold, bound(gold));
  validate_segments(predicted, bound(predicted));

  if (gold.empty() && predicted.empty()) return 1.0;
  if (gold.empty() || predicted.empty()) return 0.0;

  std::size_t tp_pred = 0;
  for (const auto& p : predicted) {
    tp_pred += std::any_of(gold.begin(), gold.end(), [&](const Segment& g) {
      return g.label == p.label && segments_match(g, p);
    });
  }
  std::size_t tp_gold = 0;
  for (const auto& g : gold) {
    tp_gold += std::any_of(predicted.begin(), predicted.end(), [&](const Segment& p) {
      return g.label == p.label && segments_match(g, p);
    });
  }
  const double precision = static_cast<double>(tp_pred) / static_cast<double>(predicted.size());
  const double recall = static_cast<double>(tp_gold) / static_cast<double>(gold.size());
  const double denom = precision + recall;
  return denom == 0.0 ? 0.0 : 2.0 * precision * recall / denom;
}

EvalReport segment_f1(const Corpus& gold, const Predictions& preds, ClassSet classes) {
  check_predictions(gold, preds);
  EvalReport r;
  r.measure = Measure::Segment;
  r.class_set = classes;
  r.n_sentences = gold.size();
  double sum = 0.0;
  for (const auto& s : gold) {
    const auto g = labels_to_segments(view_for(s.labels, classes));
    const auto p = labels_to_segments(view_for(preds.at(s.sentence_id), classes));
    sum += segment_f1_sentence(g, p);
  }
  r.macro_f1 = gold.empty() ? 0.0 : sum / static_cast<double>(gold.size());
  return r;
}

StanceLabel sentence_label(std::span<const StanceLabel> labels, std::uint64_t tie_seed) {
  std::size_t pro = 0;
  std::size_t con = 0;
  for (auto l : labels) {
    pro += l == StanceLabel::Pro;
    con += l == StanceLabel::Con;
  }
  if (pro == 0 && con == 0) return StanceLabel::Non;
  if (pro > con) return StanceLabel::Pro;
  if (con > pro) return StanceLabel::Con;
  return (splitmix64(tie_seed) & 1U) != 0 ? StanceLabel::Con : StanceLabel::Pro;
}

std::uint64_t sentence_tie_seed(std::uint64_t tie_seed,
                                std::string_view sentence_id) noexcept {
  return derive_seed(tie_seed, sentence_id);
}

EvalReport sentence_f1(const Corpus& gold, const Predictions& preds,
                       std::uint64_t tie_seed, ClassSet classes) {
  check_predictions(gold, preds);
  Tally tally;
  for (const auto& s : gold) {
    const auto seed = sentence_tie_seed(tie_seed, s.sentence_id);
    const auto g = sentence_label(view_for(s.labels, classes), seed);
    const auto p = sentence_label(view_for(preds.at(s.sentence_id), classes), seed);
    tally.add(g, p);
  }
  auto r = report_from_tally(Measure::Sentence, classes, tally, gold.size());
  r.tie_seed = tie_seed;
  return r;
}

}  // namespace aurc
