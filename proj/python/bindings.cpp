#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "aurc/aggregate.hpp"
#include "aurc/agreement.hpp"
#include "aurc/corpus.hpp"
#include "aurc/corpus_io.hpp"
#include "aurc/error.hpp"
#include "aurc/metrics.hpp"
#include "aurc/sampling.hpp"
#include "aurc/tagger.hpp"
#include "aurc/window.hpp"
#ifdef AURC_WITH_CLI
#include "cli.hpp"
#endif

namespace py = pybind11;
using namespace aurc;

namespace {

// Labels travel as "PRO" / "CON" / "NON" strings on the Python side.
Labels to_labels(const std::vector<std::string>& names) {
  Labels out;
  out.reserve(names.size());
  for (const auto& n : names) {
    const auto l = parse_label(n);
    if (!l) throw ValidationError("unknown label '" + n + "'");
    out.push_back(*l);
  }
  return out;
}

std::vector<std::string> from_labels(std::span<const StanceLabel> labels) {
  std::vector<std::string> out;
  for (auto l : labels) out.emplace_back(to_string(l));
  return out;
}

using PySegment = std::tuple<std::string, std::size_t, std::size_t>;

std::vector<Segment> to_segments(const std::vector<PySegment>& in) {
  std::vector<Segment> out;
  for (const auto& [label, start, end] : in) {
    const auto l = parse_label(label);
    if (!l) throw ValidationError("unknown label '" + label + "'");
    out.push_back({*l, start, end});
  }
  return out;
}

std::vector<PySegment> from_segments(const std::vector<Segment>& in) {
  std::vector<PySegment> out;
  for (const auto& s : in) out.emplace_back(std::string(to_string(s.label)), s.start, s.end);
  return out;
}

const Topic& topic_arg(const std::string& ref) {
  const Topic* t = find_topic_by_id(ref);
  if (t == nullptr) t = find_topic_by_name(ref);
  if (t == nullptr) throw ValidationError("unknown topic '" + ref + "'");
  return *t;
}

std::optional<SplitPart> split_field(const py::dict& d, const char* key) {
  if (!d.contains(key) || d[key].is_none()) return std::nullopt;
  const auto text = d[key].cast<std::string>();
  const auto part = parse_split_part(text);
  if (!part) throw ValidationError(std::string(key) + ": unknown split '" + text + "'");
  return part;
}

// Sentences as dicts with the canonical JSONL keys.
Corpus to_corpus(const py::list& sentences) {
  Corpus out;
  for (const auto& item : sentences) {
    const auto d = item.cast<py::dict>();
    LabeledSentence s;
    s.sentence_id = d["sentence_id"].cast<std::string>();
    s.topic = topic_arg(d["topic_id"].cast<std::string>());
    s.tokens = d["tokens"].cast<std::vector<std::string>>();
    s.labels = to_labels(d["labels"].cast<std::vector<std::string>>());
    s.split_in_domain = split_field(d, "split_in_domain");
    s.split_cross_domain = split_field(d, "split_cross_domain");
    validate_sentence(s);
    out.push_back(std::move(s));
  }
  return out;
}

py::object split_value(const std::optional<SplitPart>& p) {
  return p ? py::object(py::str(std::string(to_string(*p)))) : py::object(py::none());
}

py::list from_corpus(const Corpus& corpus) {
  py::list out;
  for (const auto& s : corpus) {
    py::dict d;
    d["sentence_id"] = s.sentence_id;
    d["topic_id"] = s.topic.id;
    d["topic_name"] = s.topic.name;
    d["tokens"] = s.tokens;
    d["labels"] = from_labels(s.labels);
    d["split_in_domain"] = split_value(s.split_in_domain);
    d["split_cross_domain"] = split_value(s.split_cross_domain);
    out.append(d);
  }
  return out;
}

Predictions to_predictions(const py::dict& preds) {
  Predictions out;
  for (const auto& [k, v] : preds) {
    out[k.cast<std::string>()] = to_labels(v.cast<std::vector<std::string>>());
  }
  return out;
}

// One annotation set per sentence: a list of label rows, one per annotator.
std::vector<AnnotationSet> to_sets(const std::vector<std::vector<std::vector<std::string>>>& in) {
  std::vector<AnnotationSet> out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    AnnotationSet s;
    s.sentence_id = "s" + std::to_string(i);
    for (std::size_t a = 0; a < in[i].size(); ++a) {
      s.annotations["a" + std::to_string(a)] = to_labels(in[i][a]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["measure"] = std::string(to_string(r.measure));
  d["classes"] = r.class_set == ClassSet::Two ? 2 : 3;
  d["macro_f1"] = r.macro_f1;
  d["n_sentences"] = r.n_sentences;
  py::list per_class;
  for (const auto& c : r.classes) {
    py::dict cd;
    cd["class"] = c.name;
    cd["precision"] = c.precision;
    cd["recall"] = c.recall;
    cd["f1"] = c.f1;
    cd["support"] = c.support;
    cd["predicted"] = c.predicted;
    per_class.append(cd);
  }
  d["per_class"] = per_class;
  if (r.tie_seed) d["tie_seed"] = *r.tie_seed;
  return d;
}

ClassSet class_set(int classes) {
  if (classes == 2) return ClassSet::Two;
  if (classes == 3) return ClassSet::Three;
  throw ValidationError("classes must be 2 or 3");
}

py::dict evaluate(const py::list& gold, const py::dict& preds, const std::string& measure,
                  int classes, std::uint64_t tie_seed) {
  const auto corpus = to_corpus(gold);
  const auto p = to_predictions(preds);
  const auto m = parse_measure(measure);
  if (!m) throw ValidationError("unknown measure '" + measure + "'");
  switch (*m) {
    case Measure::Token:
      return report_dict(token_f1(corpus, p, class_set(classes)));
    case Measure::Segment:
      return report_dict(segment_f1(corpus, p, class_set(classes)));
    case Measure::Sentence:
      return report_dict(sentence_f1(corpus, p, tie_seed, class_set(classes)));
  }
  return {};
}

py::dict stats_dict(const TopicStats& s) {
  py::dict d;
  d["topic_id"] = s.topic.id;
  d["topic_name"] = s.topic.name;
  d["sentences"] = s.sentences;
  d["arg_sentences"] = s.arg_sentences;
  d["arg_units"] = s.arg_units;
  d["non_arg_sentences"] = s.non_arg_sentences;
  d["increase_percent"] = s.increase_percent;
  d["increase_undefined"] = s.increase_undefined;
  d["mean_segment_length"] = s.mean_segment_length;
  return d;
}

class PyTagger {
 public:
  PyTagger() = default;
  explicit PyTagger(TaggerModel m) : model_(std::move(m)) {}

  static PyTagger fit(const py::list& sentences, std::size_t epochs, std::uint64_t seed) {
    return PyTagger(train(to_corpus(sentences), {epochs, seed}));
  }
  static PyTagger load(const std::string& path) { return PyTagger(load_model(path)); }

  std::vector<std::string> decode_tokens(const std::vector<std::string>& tokens,
                                         const std::string& topic) const {
    return from_labels(decode(model_, tokens, topic_arg(topic)));
  }
  void save(const std::string& path) const { save_model(model_, path); }
  std::string to_json() const {
    std::ostringstream out;
    write_model(model_, out);
    return out.str();
  }
  py::dict predict(const py::list& sentences, const std::string& level,
                   std::uint64_t tie_seed) const {
    return predictions_dict(predict_corpus(model_predictor(model_), to_corpus(sentences),
                                           level_of(level), tie_seed));
  }
  std::size_t num_features() const { return model_.num_features(); }
  std::vector<std::size_t> mistakes() const { return model_.info().mistakes; }

  static PredictionLevel level_of(const std::string& level) {
    if (level == "token") return PredictionLevel::Token;
    if (level == "sentence") return PredictionLevel::Sentence;
    throw ValidationError("level must be 'token' or 'sentence'");
  }
  static py::dict predictions_dict(const Predictions& preds) {
    py::dict out;
    for (const auto& [id, labels] : preds) out[py::str(id)] = from_labels(labels);
    return out;
  }

 private:
  TaggerModel model_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Token-level argument unit recognition and classification";

  // Translators registered later are tried first, so subclasses go last.
  const auto base = py::register_exception<Error>(m, "AurcError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<UndefinedError>(m, "UndefinedError", base.ptr());

  m.attr("__version__") = "0.1.0";

  m.def("topics", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& t : known_topics()) out.emplace_back(t.id, t.name);
    return out;
  });

  m.def("labels_to_segments",
        [](const std::vector<std::string>& labels) {
          return from_segments(labels_to_segments(to_labels(labels)));
        },
        py::arg("labels"));
  m.def("segments_to_labels",
        [](const std::vector<PySegment>& segments, std::size_t length) {
          return from_labels(segments_to_labels(to_segments(segments), length));
        },
        py::arg("segments"), py::arg("length"));

  m.def("majority_vote",
        [](const std::vector<std::vector<std::string>>& rows) {
          return from_labels(majority_vote(to_sets({rows}).front()));
        },
        py::arg("annotations"), "Per-token majority over annotator rows; ties give NON.");
  m.def("overlap_curve",
        [](const std::vector<std::vector<std::vector<std::string>>>& sentences, std::size_t k) {
          const auto sets = to_sets(sentences);
          std::vector<Labels> reference;
          for (const auto& s : sets) reference.push_back(majority_vote(s));
          return overlap_curve(reference, sets, k);
        },
        py::arg("sentences"), py::arg("k"));
  m.def("alpha_nominal",
        [](const std::vector<std::vector<std::vector<std::string>>>& sentences) {
          const auto r = alpha_nominal(to_sets(sentences));
          py::dict d;
          d["alpha"] = r.alpha;
          d["observed_disagreement"] = r.observed_disagreement;
          d["expected_disagreement"] = r.expected_disagreement;
          d["n_tokens"] = r.n_tokens;
          d["n_annotators"] = r.n_annotators;
          d["n_values"] = r.n_values;
          return d;
        },
        py::arg("sentences"));

  m.def("segment_f1_sentence",
        [](const std::vector<PySegment>& gold, const std::vector<PySegment>& pred) {
          return segment_f1_sentence(to_segments(gold), to_segments(pred));
        },
        py::arg("gold"), py::arg("predicted"));
  m.def("sentence_label",
        [](const std::vector<std::string>& labels, std::uint64_t tie_seed) {
          return std::string(to_string(sentence_label(to_labels(labels), tie_seed)));
        },
        py::arg("labels"), py::arg("tie_seed") = kDefaultTieSeed);
  m.def("evaluate", &evaluate, py::arg("gold"), py::arg("predictions"),
        py::arg("measure") = "token", py::arg("classes") = 3,
        py::arg("tie_seed") = kDefaultTieSeed);

  m.def("load_corpus", [](const std::string& path) { return from_corpus(load_corpus(path)); },
        py::arg("path"));
  m.def("save_corpus",
        [](const py::list& sentences, const std::string& path) {
          save_corpus(to_corpus(sentences), path);
        },
        py::arg("sentences"), py::arg("path"));
  m.def("make_splits",
        [](const py::list& sentences, bool keep_existing) {
          return from_corpus(make_splits(to_corpus(sentences), {keep_existing}));
        },
        py::arg("sentences"), py::arg("keep_existing") = true);
  m.def("select_split",
        [](const py::list& sentences, const std::string& scheme, const std::string& part) {
          const auto s = parse_split_scheme(scheme);
          const auto p = parse_split_part(part);
          if (!s || !p) throw ValidationError("unknown split '" + scheme + "/" + part + "'");
          return from_corpus(select_split(to_corpus(sentences), *s, *p));
        },
        py::arg("sentences"), py::arg("scheme"), py::arg("part"));
  m.def("corpus_stats",
        [](const py::list& sentences) {
          const auto st = compute_stats(to_corpus(sentences));
          py::dict d;
          py::list rows;
          for (const auto& t : st.per_topic) rows.append(stats_dict(t));
          d["per_topic"] = rows;
          d["total"] = stats_dict(st.total);
          return d;
        },
        py::arg("sentences"));
  m.def("render_argument",
        [](const std::string& text, const std::string& topic, const std::string& stance) {
          const auto l = parse_label(stance);
          if (!l) throw ValidationError("unknown stance '" + stance + "'");
          return render_argument(text, topic_arg(topic), *l);
        },
        py::arg("text"), py::arg("topic"), py::arg("stance"));

  m.def("windows",
        [](std::size_t length, std::size_t size, std::size_t stride) {
          std::vector<std::pair<std::size_t, std::size_t>> out;
          for (const auto& w : windows(length, {size, stride})) out.emplace_back(w.start, w.end);
          return out;
        },
        py::arg("length"), py::arg("size") = 45, py::arg("stride") = 1);

  m.def("majority_predictions",
        [](const py::list& sentences) {
          return PyTagger::predictions_dict(
              predict_corpus(majority_predictor(), to_corpus(sentences), PredictionLevel::Token));
        },
        py::arg("sentences"));

  py::class_<PyTagger>(m, "Tagger")
      .def(py::init<>())
      .def_static("train", &PyTagger::fit, py::arg("sentences"), py::arg("epochs") = 10,
                  py::arg("seed") = 0)
      .def_static("load", &PyTagger::load, py::arg("path"))
      .def("decode", &PyTagger::decode_tokens, py::arg("tokens"), py::arg("topic"))
      .def("predict", &PyTagger::predict, py::arg("sentences"), py::arg("level") = "token",
           py::arg("tie_seed") = kDefaultTieSeed)
      .def("save", &PyTagger::save, py::arg("path"))
      .def("to_json", &PyTagger::to_json)
      .def_property_readonly("num_features", &PyTagger::num_features)
      .def_property_readonly("mistakes", &PyTagger::mistakes);

#ifdef AURC_WITH_CLI
  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::vector<const char*> argv{"aurc"};
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
          return std::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs one aurc invocation; returns (exit code, stdout, stderr).");
#endif
}
