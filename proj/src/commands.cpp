#include "lvckit/commands.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <ostream>

#include "lvckit/conllu.hpp"
#include "lvckit/errors.hpp"
#include "lvckit/featurize.hpp"
#include "lvckit/log.hpp"
#include "lvckit/logreg.hpp"
#include "lvckit/persist.hpp"
#include "lvckit/supervision.hpp"

namespace lvc {

namespace {

namespace fs = std::filesystem;

struct ParsedCorpus {
  std::vector<Treebank> treebanks;
  std::vector<ParseStats> stats;
  std::size_t total_sentences = 0;
};

ParsedCorpus load_treebanks(const ExperimentConfig& config) {
  if (config.treebank_paths.empty())
    throw ConfigError("no treebank paths configured (data.treebanks)");
  ParsedCorpus corpus;
  for (const std::string& path : config.treebank_paths) {
    ParseOptions opts;
    opts.strict = config.strict_parse;
    ParseResult result = parse_conllu_file(path, opts);
    corpus.total_sentences += result.stats.sentences;
    corpus.stats.push_back(result.stats);
    corpus.treebanks.push_back(std::move(result.treebank));
  }
  if (corpus.total_sentences == 0)
    throw DataError("treebanks contain zero sentences");
  return corpus;
}

void ensure_output_dir(const ExperimentConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec)
    throw DataError("cannot create output directory " + config.output_dir +
                    ": " + ec.message());
}

nlohmann::json parse_stats_json(const ParseStats& st) {
  return {{"sentences", st.sentences},
          {"tokens", st.tokens},
          {"empty_nodes_skipped", st.empty_nodes_skipped},
          {"malformed_lines_skipped", st.malformed_lines_skipped},
          {"sentences_dropped", st.sentences_dropped},
          {"root_anomalies", st.root_anomalies},
          {"duplicate_sent_ids", st.duplicate_sent_ids}};
}

std::map<SentenceKey, const Sentence*> index_sentences(
    const std::vector<Treebank>& treebanks) {
  std::map<SentenceKey, const Sentence*> index;
  for (const Treebank& tb : treebanks)
    for (const Sentence& s : tb.sentences)
      index.emplace(SentenceKey{tb.name, s.sent_id}, &s);
  return index;
}

// Feature vectors for labeled sentences under either representation. The
// grammar route joins back to the parsed treebanks by (treebank, sent_id).
struct DatasetFeaturizer {
  const ExperimentConfig& config;
  const std::vector<LabeledSentence>& dataset;
  std::vector<Treebank> treebanks;  // populated for grammar only
  std::map<SentenceKey, const Sentence*> sentence_index;

  DatasetFeaturizer(const ExperimentConfig& cfg,
                    const std::vector<LabeledSentence>& data)
      : config(cfg), dataset(data) {
    if (config.representation == Representation::Grammar) {
      ParsedCorpus corpus = load_treebanks(config);
      treebanks = std::move(corpus.treebanks);
      sentence_index = index_sentences(treebanks);
    }
  }

  const Sentence& joined(const LabeledSentence& ls) const {
    auto it = sentence_index.find({ls.treebank, ls.sent_id});
    if (it == sentence_index.end())
      throw DataError("dataset sentence " + ls.treebank + "/" + ls.sent_id +
                      " not found in the configured treebanks");
    return *it->second;
  }

  FeatureSpace fit(const std::vector<std::size_t>& train_indices) const {
    if (config.representation == Representation::LemmaTfidf) {
      std::vector<std::vector<std::string>> docs;
      docs.reserve(train_indices.size());
      for (std::size_t i : train_indices)
        docs.push_back(lemma_text(dataset[i], config.casing));
      return fit_tfidf(docs, config.max_features, config.ngram_max,
                       config.casing);
    }
    std::vector<const Sentence*> train_sentences;
    train_sentences.reserve(train_indices.size());
    for (std::size_t i : train_indices)
      train_sentences.push_back(&joined(dataset[i]));
    return fit_grammar_inventory(train_sentences);
  }

  SparseVector vectorize(const LabeledSentence& ls, const FeatureSpace& space,
                         CoverageTally* coverage = nullptr) const {
    if (const auto* vocab = std::get_if<TfidfVocabulary>(&space))
      return tfidf_transform(lemma_text(ls, vocab->casing), *vocab);
    const auto& inv = std::get<GrammarInventory>(space);
    return grammar_vector(joined(ls), inv, coverage);
  }
};

struct HeldoutScores {
  std::vector<double> scores;
  std::vector<int> labels;
};

HeldoutScores heldout_scores(const ExperimentConfig& config,
                             const std::vector<LabeledSentence>& dataset,
                             const FeatureSpace& space,
                             const LogRegModel& model) {
  std::vector<int> labels;
  labels.reserve(dataset.size());
  for (const LabeledSentence& s : dataset) labels.push_back(s.label);
  SplitIndices split = stratified_split(
      labels, {config.train_fraction, config.seed});
  DatasetFeaturizer featurizer(config, dataset);
  HeldoutScores out;
  out.scores.reserve(split.test.size());
  out.labels.reserve(split.test.size());
  for (std::size_t i : split.test) {
    out.scores.push_back(
        predict_proba(model, featurizer.vectorize(dataset[i], space)));
    out.labels.push_back(dataset[i].label);
  }
  return out;
}

}  // namespace

void cmd_extract(const ExperimentConfig& config) {
  ensure_output_dir(config);
  ParsedCorpus corpus = load_treebanks(config);

  std::vector<LvcCandidate> all;
  nlohmann::json per_treebank = nlohmann::json::array();
  for (std::size_t i = 0; i < corpus.treebanks.size(); ++i) {
    const Treebank& tb = corpus.treebanks[i];
    ExtractionResult result = extract_candidates(tb);
    per_treebank.push_back(
        {{"treebank", tb.name},
         {"rule", rule_name(result.rule)},
         {"candidates", result.candidates.size()},
         {"skipped_root_attached", result.skipped_root_attached},
         {"parse", parse_stats_json(corpus.stats[i])}});
    all.insert(all.end(), std::make_move_iterator(result.candidates.begin()),
               std::make_move_iterator(result.candidates.end()));
  }
  if (all.empty()) throw DataError("no LVC candidates extracted");

  const std::string hash = config.hash();
  write_review_sheet(all, config.review_sheet_path(), "config=" + hash);
  write_json_file(config.output_dir + "/extract_stats.json",
                  {{"config_hash", hash},
                   {"total_candidates", all.size()},
                   {"total_sentences", corpus.total_sentences},
                   {"treebanks", per_treebank}});
  log_info("extract: " + std::to_string(all.size()) + " candidates -> " +
           config.review_sheet_path());
}

void cmd_build(const ExperimentConfig& config) {
  ensure_output_dir(config);
  ParsedCorpus corpus = load_treebanks(config);

  std::vector<LvcCandidate> all;
  for (const Treebank& tb : corpus.treebanks) {
    ExtractionResult result = extract_candidates(tb);
    all.insert(all.end(), std::make_move_iterator(result.candidates.begin()),
               std::make_move_iterator(result.candidates.end()));
  }
  std::vector<ReviewDecision> decisions =
      read_review_sheet(config.review_sheet_path());
  ReviewOutcome outcome = apply_review(all, decisions);
  AssembledDataset assembled =
      assemble_dataset(corpus.treebanks, outcome.kept,
                       outcome.removed_sentences);
  if (!assembled.stats.identities_hold())
    throw DataError("dataset accounting identities violated");

  const std::string hash = config.hash();
  write_dataset_jsonl(assembled.sentences, config.dataset_file_path(), hash);
  nlohmann::json stats = to_json(assembled.stats);
  stats["config_hash"] = hash;
  stats["kept_candidates"] = outcome.kept.size();
  write_json_file(config.output_dir + "/dataset_stats.json", stats);
  log_info("build: " + std::to_string(assembled.sentences.size()) +
           " sentences (" + std::to_string(assembled.stats.positive_sentences) +
           " positive) -> " + config.dataset_file_path());
}

void cmd_train(const ExperimentConfig& config) {
  ensure_output_dir(config);
  std::vector<LabeledSentence> dataset =
      read_dataset_jsonl(config.dataset_file_path());
  if (dataset.empty()) throw DataError("dataset is empty");

  std::vector<int> labels;
  labels.reserve(dataset.size());
  for (const LabeledSentence& s : dataset) labels.push_back(s.label);
  SplitIndices split =
      stratified_split(labels, {config.train_fraction, config.seed});

  DatasetFeaturizer featurizer(config, dataset);
  FeatureSpace space = featurizer.fit(split.train);
  const std::string space_id = feature_space_id(space);

  std::vector<SparseVector> train_x;
  std::vector<int> train_y;
  train_x.reserve(split.train.size());
  for (std::size_t i : split.train) {
    train_x.push_back(featurizer.vectorize(dataset[i], space));
    train_y.push_back(dataset[i].label);
  }

  TrainConfig tc;
  tc.lambda = config.lambda;
  tc.max_iter = config.effective_max_iter();
  tc.tol = config.tol;
  ClassWeights cw = balanced_class_weights(train_y);
  LogRegModel model = train_logreg(train_x, train_y, tc, cw);
  model.feature_space_id = space_id;

  // Held-out metrics at the default threshold.
  CoverageTally coverage;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i : split.test) {
    const SparseVector x = featurizer.vectorize(dataset[i], space, &coverage);
    const int pred = predict_label(model, x);
    if (dataset[i].label == 1) {
      pred == 1 ? ++tp : ++fn;
    } else {
      pred == 1 ? ++fp : ++tn;
    }
  }
  const std::size_t test_n = split.test.size();
  const double acc = test_n > 0 ? static_cast<double>(tp + tn) /
                                      static_cast<double>(test_n)
                                : 0.0;
  const double prec =
      (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                    : 0.0;
  const double rec =
      (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn)
                    : 0.0;
  const double f1 =
      (prec + rec) > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;

  const std::string hash = config.hash();
  nlohmann::json space_json =
      std::visit([](const auto& s) { return to_json(s); }, space);
  space_json["config_hash"] = hash;
  write_json_file(config.output_dir + "/feature_space.json", space_json);

  nlohmann::json model_json = to_json(model);
  model_json["config_hash"] = hash;
  model_json["class_weights"] = {{"w_pos", cw.w_pos}, {"w_neg", cw.w_neg}};
  // the inputs that make scores reproducible travel with the model
  model_json["representation"] = representation_name(config.representation);
  if (space_json.contains("weighting"))
    model_json["weighting"] = space_json["weighting"];
  write_json_file(config.output_dir + "/model.json", model_json);

  write_json_file(
      config.output_dir + "/heldout_metrics.json",
      {{"config_hash", hash},
       {"split", {{"train", split.train.size()}, {"test", test_n}}},
       {"counts", {{"tp", tp}, {"fp", fp}, {"fn", fn}, {"tn", tn}}},
       {"accuracy", acc},
       {"precision", prec},
       {"recall", rec},
       {"f1", f1},
       {"eval_coverage",
        {{"matched", coverage.matched}, {"unmatched", coverage.unmatched}}}});
  log_info("train: " + std::to_string(split.train.size()) + " examples, " +
           std::to_string(model.iterations) + " iterations, heldout acc " +
           std::to_string(acc));
}

void cmd_calibrate(const ExperimentConfig& config) {
  if (config.calibration == CalibrationMode::None) {
    std::cerr << "calibrate: mode is none; nothing to do\n";
    return;
  }
  ensure_output_dir(config);
  nlohmann::json model_json =
      read_json_file(config.output_dir + "/model.json");
  LogRegModel model = model_from_json(model_json);
  FeatureSpace space = feature_space_from_json(
      read_json_file(config.output_dir + "/feature_space.json"));
  check_feature_space(model, feature_space_id(space));

  std::vector<LabeledSentence> dataset =
      read_dataset_jsonl(config.dataset_file_path());
  HeldoutScores held = heldout_scores(config, dataset, space, model);
  std::vector<ThresholdPoint> points = pr_sweep(held.scores, held.labels);

  TauSelection selection;
  if (config.calibration == CalibrationMode::MaxF1) {
    selection = {select_tau_max_f1(points), true};
  } else {
    selection = select_tau_precision_floor(points, config.precision_floor);
    if (!selection.floor_met)
      log_warn("precision floor " + std::to_string(config.precision_floor) +
               " unmet on the held-out split; using the precision maximizer");
  }

  const std::string hash = config.hash();
  write_text_file(config.output_dir + "/sweep.csv",
                  sweep_to_csv(points, "config=" + hash));
  model.threshold = selection.tau;
  nlohmann::json out = to_json(model);
  out["config_hash"] = hash;
  out["calibration"] = {
      {"mode", calibration_mode_name(config.calibration)},
      {"precision_floor", config.precision_floor},
      {"floor_met", selection.floor_met},
      {"tau", selection.tau},
      {"heldout", "stratified test split (train_fraction=" +
                      std::to_string(config.train_fraction) + ", seed=" +
                      std::to_string(config.seed) + ")"}};
  write_json_file(config.output_dir + "/model_calibrated.json", out);
  log_info("calibrate: tau=" + std::to_string(selection.tau) + " over " +
           std::to_string(points.size()) + " candidate thresholds");
}

SplitReport cmd_evaluate(const ExperimentConfig& config,
                         const std::string& model_path,
                         const std::string& predictions_path,
                         std::ostream* text_out) {
  ensure_output_dir(config);
  if (config.diagnostic_items.empty())
    throw ConfigError("no diagnostic set configured (diagnostic.items)");
  std::vector<DiagnosticItem> items =
      read_diagnostic_jsonl(config.diagnostic_items);
  validate_diagnostic_set(items, config.per_condition > 0
                                     ? std::optional(config.per_condition)
                                     : std::nullopt);

  std::map<std::string, int> preds;
  std::string setting;
  nlohmann::json metadata;
  if (!predictions_path.empty()) {
    preds = prediction_labels(import_predictions_file(predictions_path));
    setting = "imported";
    metadata["predictions_file"] = predictions_path;
  } else {
    std::string path = model_path;
    if (path.empty()) {
      path = config.output_dir + "/model_calibrated.json";
      if (!fs::exists(path)) path = config.output_dir + "/model.json";
    }
    LogRegModel model = model_from_json(read_json_file(path));
    FeatureSpace space = feature_space_from_json(
        read_json_file(config.output_dir + "/feature_space.json"));
    check_feature_space(model, feature_space_id(space));
    metadata["model_file"] = path;
    metadata["tau"] = model.threshold;
    setting = std::string(representation_name(config.representation));

    const bool grammar = config.representation == Representation::Grammar;
    std::map<std::string, const Sentence*> companion;
    Treebank companion_tb;
    if (grammar) {
      if (config.diagnostic_conllu.empty())
        throw DataError(
            "grammar evaluation needs a companion CoNLL-U file "
            "(diagnostic.conllu)");
      ParseOptions opts;
      opts.strict = true;  // the diagnostic set must be perfect
      opts.name = "diagnostic";
      companion_tb = parse_conllu_file(config.diagnostic_conllu, opts).treebank;
      for (const Sentence& s : companion_tb.sentences)
        companion.emplace(s.sent_id, &s);
    }

    const auto* vocab = std::get_if<TfidfVocabulary>(&space);
    CoverageTally coverage;
    for (const DiagnosticItem& item : items) {
      SparseVector x;
      if (!grammar) {
        std::vector<std::string> tokens;
        if (item.lemma_text) {
          tokens.reserve(item.lemma_text->size());
          for (const std::string& t : *item.lemma_text)
            tokens.push_back(to_lower(t, vocab->casing));
        } else if (item.conllu_ref && !config.diagnostic_conllu.empty()) {
          // fall back to the companion file when lemma_text is absent
          ParseOptions opts;
          opts.strict = true;
          opts.name = "diagnostic";
          if (companion.empty()) {
            companion_tb =
                parse_conllu_file(config.diagnostic_conllu, opts).treebank;
            for (const Sentence& s : companion_tb.sentences)
              companion.emplace(s.sent_id, &s);
          }
          auto it = companion.find(*item.conllu_ref);
          if (it == companion.end())
            throw DataError("diagnostic item " + item.item_id +
                            ": conllu_ref '" + *item.conllu_ref +
                            "' not found in companion file");
          tokens = lemma_text(*it->second, vocab->casing);
        } else {
          throw DataError("diagnostic item " + item.item_id +
                          " has no lemma_text (and no conllu_ref fallback)");
        }
        x = tfidf_transform(tokens, *vocab);
      } else {
        if (!item.conllu_ref)
          throw DataError("diagnostic item " + item.item_id +
                          " has no conllu_ref for grammar evaluation");
        auto it = companion.find(*item.conllu_ref);
        if (it == companion.end())
          throw DataError("diagnostic item " + item.item_id +
                          ": conllu_ref '" + *item.conllu_ref +
                          "' not found in companion file");
        x = grammar_vector(*it->second, std::get<GrammarInventory>(space),
                           &coverage);
      }
      preds.emplace(item.item_id, predict_label(model, x));
    }
    metadata["eval_coverage"] = {{"matched", coverage.matched},
                                 {"unmatched", coverage.unmatched}};
  }

  SplitReport report =
      evaluate_split(preds, items, config.run_label, setting);
  const std::string hash = config.hash();
  const std::string text = render_report({report}, ReportFormat::Text);
  write_text_file(config.output_dir + "/report.txt",
                  text + "# config=" + hash + "\n");
  nlohmann::json j = to_json(report);
  j["config_hash"] = hash;
  j["metadata"] = metadata;
  write_json_file(config.output_dir + "/report.json", j);
  if (text_out) *text_out << text;
  return report;
}

std::string cmd_report(const std::vector<std::string>& report_paths,
                       ReportFormat format) {
  if (report_paths.empty()) throw ConfigError("no report files given");
  std::vector<SplitReport> reports;
  reports.reserve(report_paths.size());
  for (const std::string& path : report_paths)
    reports.push_back(report_from_json(read_json_file(path)));
  return render_report(reports, format);
}

}  // namespace lvc
