#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "aurc/aggregate.hpp"
#include "aurc/agreement.hpp"
#include "aurc/corpus.hpp"
#include "aurc/corpus_io.hpp"
#include "aurc/error.hpp"
#include "aurc/manifest.hpp"
#include "aurc/metrics.hpp"
#include "aurc/random.hpp"
#include "aurc/sampling.hpp"
#include "aurc/tagger.hpp"
#include "aurc/window.hpp"
#include "json.hpp"

namespace aurc::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct Args {
  std::string corpus;
  std::string out;
  std::string tsv;
  std::string config;
  std::string annotations;
  std::string sentences;
  std::string candidates;
  std::string model;
  std::string pred;
  std::string split;
  std::string subset;
  std::string measure = "all";
  std::string level = "token";
  std::string topic;
  std::string sentence_id;
  std::string stance;
  std::string text;
  int classes = 3;
  std::size_t n = kDefaultTarget;
  double p = kDefaultSelectProbability;
  std::uint64_t seed = 0;
  std::uint64_t tie_seed = kDefaultTieSeed;
  std::size_t epochs = 10;
  std::size_t size = 45;
  std::size_t stride = 1;
  std::optional<std::uint64_t> shuffle_seed;
  bool json = false;
  bool force = false;
  bool overlap = false;
};

std::string default_corpus() {
  const char* env = std::getenv("AURC_CORPUS");
  return env ? env : "";
}

std::string require_corpus(const Args& a) {
  if (!a.corpus.empty()) return a.corpus;
  throw ValidationError("no corpus given (use --corpus or set AURC_CORPUS)");
}

ClassSet class_set(int classes) {
  if (classes == 2) return ClassSet::Two;
  if (classes == 3) return ClassSet::Three;
  throw ValidationError("--classes must be 2 or 3");
}

// The requested evaluation subset, or the whole corpus when neither flag
// is given.
Corpus subset_of(const Corpus& corpus, const Args& a) {
  if (a.split.empty() && a.subset.empty()) return corpus;
  if (a.split.empty() || a.subset.empty()) {
    throw ValidationError("--split and --subset must be given together");
  }
  const auto scheme = parse_split_scheme(a.split);
  if (!scheme) throw ValidationError("unknown --split '" + a.split + "'");
  const auto part = parse_split_part(a.subset);
  if (!part) throw ValidationError("unknown --subset '" + a.subset + "'");
  return select_split(corpus, *scheme, *part);
}

RunManifest manifest_for(const CLI::App& sub) {
  RunManifest m;
  m.subcommand = sub.get_name();
  for (const auto* opt : sub.get_options()) {
    if (opt->get_name() == "--help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    m.flags[opt->get_name()] = value;
  }
  return m;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

ojson stats_json(const TopicStats& st) {
  ojson j;
  j["topic_id"] = st.topic.id;
  j["topic_name"] = st.topic.name;
  j["sentences"] = st.sentences;
  j["arg_sentences"] = st.arg_sentences;
  j["arg_units"] = st.arg_units;
  j["non_arg_sentences"] = st.non_arg_sentences;
  j["increase_percent"] = st.increase_percent;
  j["increase_undefined"] = st.increase_undefined;
  j["mean_segment_length"] = st.mean_segment_length;
  return j;
}

ojson report_json(const EvalReport& r) {
  ojson j;
  j["measure"] = std::string(to_string(r.measure));
  j["classes"] = r.class_set == ClassSet::Two ? 2 : 3;
  j["macro_f1"] = r.macro_f1;
  j["n_sentences"] = r.n_sentences;
  j["per_class"] = ojson::array();
  for (const auto& c : r.classes) {
    j["per_class"].push_back({{"class", c.name},
                              {"precision", c.precision},
                              {"recall", c.recall},
                              {"f1", c.f1},
                              {"support", c.support},
                              {"predicted", c.predicted}});
  }
  j["tie_seed"] = r.tie_seed ? ojson(*r.tie_seed) : ojson(nullptr);
  return j;
}

void print_report(const EvalReport& r, std::ostream& out) {
  out << to_string(r.measure) << " F1 (" << (r.class_set == ClassSet::Two ? 2 : 3)
      << " classes, " << r.n_sentences << " sentences): " << fixed(r.macro_f1, 3) << '\n';
  for (const auto& c : r.classes) {
    out << "  " << std::left << std::setw(4) << c.name << " P " << fixed(c.precision, 3)
        << "  R " << fixed(c.recall, 3) << "  F1 " << fixed(c.f1, 3) << "  support "
        << c.support << '\n';
  }
}

std::vector<AnnotationRecord> read_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_annotations_jsonl(in, path);
}

// --- subcommands -----------------------------------------------------------

int cmd_import(const Args& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  auto config = a.config.empty() ? TsvImportConfig{} : load_tsv_config(a.config);
  auto result = import_tsv(a.tsv, config);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  save_corpus(result.corpus, a.out);
  auto m = manifest_for(sub);
  m.add_input(a.tsv);
  if (!a.config.empty()) m.add_input(a.config);
  if (config.splits_file) m.add_input(*config.splits_file);
  write_manifest_for(a.out, m);
  out << "imported " << result.corpus.size() << " sentences (" << result.warnings.size()
      << " warnings) -> " << a.out << '\n';
  return 0;
}

int cmd_stats(const Args& a, std::ostream& out) {
  const auto corpus = subset_of(load_corpus(require_corpus(a)), a);
  const auto stats = compute_stats(corpus);
  if (a.json) {
    ojson j;
    j["topics"] = ojson::array();
    for (const auto& st : stats.per_topic) j["topics"].push_back(stats_json(st));
    j["total"] = stats_json(stats.total);
    out << j.dump(2) << '\n';
    return 0;
  }
  out << std::left << std::setw(4) << "#" << std::setw(24) << "topic" << std::right
      << std::setw(11) << "#sentences" << std::setw(11) << "#arg-sent" << std::setw(11)
      << "#arg-unit" << std::setw(12) << "increase%" << std::setw(10) << "#non-arg"
      << std::setw(10) << "mean-len" << '\n';
  auto row = [&](const TopicStats& st, const std::string& id) {
    out << std::left << std::setw(4) << id << std::setw(24) << st.topic.name << std::right
        << std::setw(11) << st.sentences << std::setw(11) << st.arg_sentences
        << std::setw(11) << st.arg_units << std::setw(12)
        << ("+" + fixed(st.increase_percent, 2) + (st.increase_undefined ? "*" : ""))
        << std::setw(10) << st.non_arg_sentences << std::setw(10)
        << fixed(st.mean_segment_length, 2) << '\n';
  };
  for (const auto& st : stats.per_topic) row(st, st.topic.id);
  row(stats.total, "");
  if (stats.total.increase_undefined) out << "* no argumentative sentences; increase reported as 0\n";
  return 0;
}

int cmd_split(const Args& a, const CLI::App& sub, std::ostream& out) {
  const auto path = require_corpus(a);
  auto corpus = make_splits(load_corpus(path), SplitOptions{.keep_existing = !a.force});
  save_corpus(corpus, a.out);
  auto m = manifest_for(sub);
  m.add_input(path);
  write_manifest_for(a.out, m);
  for (auto scheme : {SplitScheme::InDomain, SplitScheme::CrossDomain}) {
    out << to_string(scheme) << ":";
    for (auto part : {SplitPart::Train, SplitPart::Dev, SplitPart::Test}) {
      out << ' ' << to_string(part) << '=' << select_split(corpus, scheme, part).size();
    }
    out << '\n';
  }
  return 0;
}

int cmd_aggregate(const Args& a, const CLI::App& sub, std::ostream& out) {
  const auto records = read_annotations(a.annotations);
  Corpus sentences;
  if (!a.sentences.empty()) sentences = load_corpus(a.sentences);
  const auto corpus = aggregate_corpus(records, sentences);
  save_corpus(corpus, a.out);
  auto m = manifest_for(sub);
  m.add_input(a.annotations);
  if (!a.sentences.empty()) m.add_input(a.sentences);
  write_manifest_for(a.out, m);
  out << "aggregated " << corpus.size() << " sentences -> " << a.out << '\n';

  if (a.overlap) {
    const auto sets = group_annotations(records);
    std::vector<Labels> reference;
    std::size_t min_annotators = SIZE_MAX;
    for (const auto& s : sets) {
      reference.push_back(majority_vote(s));
      min_annotators = std::min(min_annotators, s.annotations.size());
    }
    ojson curve = ojson::array();
    for (std::size_t k = 1; k <= min_annotators; ++k) {
      curve.push_back({{"k", k}, {"overlap_percent", overlap_curve(reference, sets, k)}});
    }
    out << curve.dump(2) << '\n';
  }
  return 0;
}

int cmd_agree(const Args& a, std::ostream& out) {
  const auto sets = group_annotations(read_annotations(a.annotations));
  const auto r = alpha_nominal(sets);
  ojson j;
  j["alpha"] = r.alpha;
  j["observed_disagreement"] = r.observed_disagreement;
  j["expected_disagreement"] = r.expected_disagreement;
  j["n_tokens"] = r.n_tokens;
  j["n_annotators"] = r.n_annotators;
  j["n_values"] = r.n_values;
  if (!a.json) {
    out << "alpha (nominal, token units, blanks included): " << fixed(r.alpha, 4) << '\n'
        << "observed disagreement: " << fixed(r.observed_disagreement, 6) << '\n'
        << "expected disagreement: " << fixed(r.expected_disagreement, 6) << '\n'
        << "tokens: " << r.n_tokens << "  annotators: " << r.n_annotators << '\n';
  }
  out << j.dump(a.json ? 2 : -1) << '\n';
  return 0;
}

int cmd_sample(const Args& a, const CLI::App& sub, std::ostream& out) {
  std::ifstream in(a.candidates);
  if (!in) throw IoError("cannot open '" + a.candidates + "' for reading");
  const auto candidates = read_candidates_jsonl(in, a.candidates);
  const auto result = run_sampling(candidates, {a.n, a.p, a.seed, a.topic});
  {
    auto f = open_out(a.out);
    write_selection_jsonl(result, f);
  }
  ojson summary;
  summary["rng"] = std::string(kRngAlgorithm);
  summary["master_seed"] = a.seed;
  summary["groups"] = ojson::array();
  for (const auto& g : result.groups) {
    summary["groups"].push_back({{"topic_id", g.topic.id},
                                 {"topic_name", g.topic.name},
                                 {"stance", std::string(to_string(g.stance))},
                                 {"candidates", g.candidates},
                                 {"eligible", g.eligible},
                                 {"selected", g.selected},
                                 {"seed", g.seed}});
  }
  {
    auto f = open_out(a.out + ".summary.json");
    f << summary.dump(2) << '\n';
  }
  auto m = manifest_for(sub);
  m.seed = a.seed;
  m.add_input(a.candidates);
  write_manifest_for(a.out, m);
  if (a.json) {
    out << summary.dump(2) << '\n';
  } else {
    for (const auto& g : result.groups) {
      out << g.topic.id << ' ' << to_string(g.stance) << ": " << g.candidates << " -> "
          << g.eligible << " eligible -> " << g.selected << " selected\n";
    }
  }
  return 0;
}

int cmd_train(const Args& a, const CLI::App& sub, std::ostream& out) {
  const auto path = require_corpus(a);
  const auto scheme = parse_split_scheme(a.split);
  if (!scheme) throw ValidationError("unknown --split '" + a.split + "'");
  const auto training = select_split(load_corpus(path), *scheme, SplitPart::Train);
  const auto model = train(training, {a.epochs, a.seed});
  save_model(model, a.out);
  auto m = manifest_for(sub);
  m.seed = a.seed;
  m.add_input(path);
  write_manifest_for(a.out, m);
  out << "trained on " << training.size() << " sentences, " << model.info().epochs_run
      << " epochs -> " << a.out << '\n';
  return 0;
}

int cmd_tag(const Args& a, const CLI::App& sub, std::ostream& out) {
  const auto path = require_corpus(a);
  const auto corpus = subset_of(load_corpus(path), a);
  PredictionLevel level;
  if (a.level == "token") {
    level = PredictionLevel::Token;
  } else if (a.level == "sentence") {
    level = PredictionLevel::Sentence;
  } else {
    throw ValidationError("--level must be token or sentence");
  }
  auto m = manifest_for(sub);
  m.add_input(path);
  Predictions preds;
  if (a.model == "majority") {
    preds = predict_corpus(majority_predictor(), corpus, level, a.tie_seed);
  } else {
    const auto model = load_model(a.model);
    m.add_input(a.model);
    preds = predict_corpus(model_predictor(model), corpus, level, a.tie_seed);
  }
  {
    auto f = open_out(a.out);
    write_predictions_jsonl(corpus, preds, f);
  }
  write_manifest_for(a.out, m);
  out << "tagged " << preds.size() << " sentences -> " << a.out << '\n';
  return 0;
}

int cmd_eval(const Args& a, std::ostream& out) {
  const auto gold = subset_of(load_corpus(require_corpus(a)), a);
  const auto preds = load_predictions(a.pred);
  const auto classes = class_set(a.classes);
  std::vector<EvalReport> reports;
  const bool all = a.measure == "all";
  if (!all && !parse_measure(a.measure)) {
    throw ValidationError("--measure must be token, segment, sentence or all");
  }
  if (all || a.measure == "token") reports.push_back(token_f1(gold, preds, classes));
  if (all || a.measure == "segment") reports.push_back(segment_f1(gold, preds, classes));
  if (all || a.measure == "sentence") {
    reports.push_back(sentence_f1(gold, preds, a.tie_seed, classes));
  }
  if (a.json) {
    ojson j = ojson::array();
    for (const auto& r : reports) j.push_back(report_json(r));
    out << j.dump(2) << '\n';
  } else {
    for (const auto& r : reports) print_report(r, out);
  }
  return 0;
}

int cmd_window_eval(const Args& a, std::ostream& out) {
  const auto subset = subset_of(load_corpus(require_corpus(a)), a);
  BoundaryFreeOptions opts;
  opts.window = {a.size, a.stride};
  opts.classes = class_set(a.classes);
  opts.tie_seed = a.tie_seed;
  opts.shuffle_seed = a.shuffle_seed;
  std::optional<TaggerModel> model;
  TokenPredictor predictor;
  if (a.model == "majority") {
    predictor = majority_predictor();
  } else {
    model = load_model(a.model);
    predictor = model_predictor(*model);
  }
  const auto r = boundary_free_eval(window_predictor(predictor), subset, opts);
  if (a.json) {
    ojson j;
    j["window"] = {{"size", a.size}, {"stride", a.stride}};
    j["reports"] = ojson::array({report_json(r.token), report_json(r.segment),
                                 report_json(r.sentence)});
    out << j.dump(2) << '\n';
  } else {
    out << "window size " << a.size << ", stride " << a.stride << '\n';
    print_report(r.token, out);
    print_report(r.segment, out);
    print_report(r.sentence, out);
  }
  return 0;
}

int cmd_render(const Args& a, std::ostream& out) {
  if (!a.text.empty()) {
    const Topic* topic = find_topic_by_id(a.topic);
    if (topic == nullptr) topic = find_topic_by_name(a.topic);
    if (topic == nullptr) throw ValidationError("unknown --topic '" + a.topic + "'");
    const auto stance = parse_label(a.stance);
    if (!stance) throw ValidationError("--stance must be PRO or CON");
    out << render_argument(a.text, *topic, *stance) << '\n';
    return 0;
  }
  const auto corpus = subset_of(load_corpus(require_corpus(a)), a);
  for (const auto& s : corpus) {
    if (!a.sentence_id.empty() && s.sentence_id != a.sentence_id) continue;
    for (const auto& seg : labels_to_segments(s.labels)) {
      if (a.json) {
        ojson j;
        j["sentence_id"] = s.sentence_id;
        j["stance"] = std::string(to_string(seg.label));
        j["start"] = seg.start;
        j["end"] = seg.end;
        j["statement"] = render_argument(s.tokens, seg, s.topic);
        out << j.dump() << '\n';
      } else {
        out << render_argument(s.tokens, seg, s.topic) << '\n';
      }
    }
  }
  return 0;
}

void add_subset_flags(CLI::App* sub, Args& a) {
  sub->add_option("--split", a.split, "in-domain | cross-domain");
  sub->add_option("--subset", a.subset, "train | dev | test");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Token-level argument unit recognition and classification toolkit", "aurc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Args a;
  a.corpus = default_corpus();

  auto corpus_opt = [&](CLI::App* sub) {
    return sub->add_option("--corpus", a.corpus, "canonical corpus JSONL (default: $AURC_CORPUS)");
  };

  auto* imp = app.add_subcommand("import", "convert a span-annotated TSV into canonical JSONL");
  imp->add_option("--tsv", a.tsv, "input TSV")->required();
  imp->add_option("--config", a.config, "key=value column mapping");
  imp->add_option("--out", a.out, "output corpus JSONL")->required();

  auto* stats = app.add_subcommand("stats", "corpus statistics per topic");
  corpus_opt(stats);
  add_subset_flags(stats, a);
  stats->add_flag("--json", a.json);

  auto* split = app.add_subcommand("split", "assign in-domain and cross-domain splits");
  corpus_opt(split);
  split->add_option("--out", a.out, "output corpus JSONL")->required();
  split->add_flag("--force", a.force, "recompute even if split tags are present");

  auto* agg = app.add_subcommand("aggregate", "majority-vote annotations into gold labels");
  agg->add_option("--annotations", a.annotations)->required();
  agg->add_option("--sentences", a.sentences, "corpus JSONL supplying tokens and topics")
      ;
  agg->add_option("--out", a.out)->required();
  agg->add_flag("--overlap", a.overlap, "print the worker-count overlap curve");

  auto* agree = app.add_subcommand("agree", "nominal alpha agreement over token labels");
  agree->add_option("--annotations", a.annotations)->required();
  agree->add_flag("--json", a.json);

  auto* sample = app.add_subcommand("sample", "rank and select annotation candidates");
  sample->add_option("--candidates", a.candidates)->required();
  sample->add_option("--out", a.out)->required();
  sample->add_option("--n", a.n, "target per topic and stance")->capture_default_str();
  sample->add_option("--p", a.p, "selection probability")->capture_default_str();
  sample->add_option("--seed", a.seed)->capture_default_str();
  sample->add_option("--topic", a.topic, "restrict to one topic id");
  sample->add_flag("--json", a.json);

  auto* tr = app.add_subcommand("train", "train the sequence tagger on a split's train part");
  corpus_opt(tr);
  tr->add_option("--split", a.split, "in-domain | cross-domain")->required();
  tr->add_option("--epochs", a.epochs)->capture_default_str();
  tr->add_option("--seed", a.seed)->capture_default_str();
  tr->add_option("--out", a.out)->required();

  auto* tag = app.add_subcommand("tag", "write predictions for a corpus subset");
  corpus_opt(tag);
  add_subset_flags(tag, a);
  tag->add_option("--model", a.model, "model JSON or 'majority'")->required();
  tag->add_option("--level", a.level, "token | sentence")->capture_default_str();
  tag->add_option("--tie-seed", a.tie_seed)->capture_default_str();
  tag->add_option("--out", a.out)->required();

  auto* ev = app.add_subcommand("eval", "token, segment and sentence F1");
  corpus_opt(ev);
  add_subset_flags(ev, a);
  ev->add_option("--pred", a.pred, "predictions JSONL")->required();
  ev->add_option("--measure", a.measure, "token | segment | sentence | all")->capture_default_str();
  ev->add_option("--classes", a.classes, "3 (PRO/CON/NON) or 2 (ARG/NON)")->capture_default_str();
  ev->add_option("--tie-seed", a.tie_seed)->capture_default_str();
  ev->add_flag("--json", a.json);

  auto* we = app.add_subcommand("window-eval", "evaluate without sentence boundaries");
  corpus_opt(we);
  add_subset_flags(we, a);
  we->add_option("--model", a.model, "model JSON or 'majority'")->required();
  we->add_option("--size", a.size)->capture_default_str();
  we->add_option("--stride", a.stride)->capture_default_str();
  we->add_option("--classes", a.classes)->capture_default_str();
  we->add_option("--tie-seed", a.tie_seed)->capture_default_str();
  we->add_option("--shuffle-seed", a.shuffle_seed, "shuffle sentences before concatenation");
  we->add_flag("--json", a.json);

  auto* render = app.add_subcommand("render", "reconstruct argument statements");
  corpus_opt(render);
  add_subset_flags(render, a);
  render->add_option("--sentence-id", a.sentence_id);
  render->add_option("--topic", a.topic, "topic id or name (with --text)");
  render->add_option("--stance", a.stance, "PRO or CON (with --text)");
  render->add_option("--text", a.text, "argument span text");
  render->add_flag("--json", a.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*imp) return cmd_import(a, *imp, out, err);
    if (*stats) return cmd_stats(a, out);
    if (*split) return cmd_split(a, *split, out);
    if (*agg) return cmd_aggregate(a, *agg, out);
    if (*agree) return cmd_agree(a, out);
    if (*sample) return cmd_sample(a, *sample, out);
    if (*tr) return cmd_train(a, *tr, out);
    if (*tag) return cmd_tag(a, *tag, out);
    if (*ev) return cmd_eval(a, out);
    if (*we) return cmd_window_eval(a, out);
    if (*render) return cmd_render(a, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace aurc::cli
