#include "lvckit/persist.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lvckit/errors.hpp"
#include "lvckit/hash.hpp"

namespace lvc {

namespace {

const char* kTfidfKind = "lemma_tfidf";
const char* kGrammarKind = "grammar";
// Recorded so persisted scores stay interpretable if the formula ever
// gains variants.
const char* kTfidfWeighting = "tf*(ln((1+N)/(1+df))+1),l2";

GrammarChannel channel_from_string(const std::string& name) {
  if (name == "UPOS") return GrammarChannel::Upos;
  if (name == "DEPREL") return GrammarChannel::Deprel;
  if (name == "MORPH") return GrammarChannel::Morph;
  throw DataError("unknown grammar channel '" + name + "'");
}

}  // namespace

std::string feature_space_id(const FeatureSpace& space) {
  return std::visit(
      [](const auto& s) { return to_hex(s.fingerprint()); }, space);
}

std::size_t feature_space_dimension(const FeatureSpace& space) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>,
                                     TfidfVocabulary>)
          return s.terms.size();
        else
          return s.features.size();
      },
      space);
}

nlohmann::json to_json(const TfidfVocabulary& vocab) {
  return nlohmann::json{{"kind", kTfidfKind},
                        {"weighting", kTfidfWeighting},
                        {"casing", casing_name(vocab.casing)},
                        {"max_features", vocab.max_features},
                        {"ngram_max", vocab.ngram_max},
                        {"corpus_size", vocab.corpus_size},
                        {"terms", vocab.terms},
                        {"doc_freq", vocab.doc_freq},
                        {"feature_space_id", to_hex(vocab.fingerprint())}};
}

nlohmann::json to_json(const GrammarInventory& inv) {
  nlohmann::json features = nlohmann::json::array();
  for (const GrammarFeature& f : inv.features)
    features.push_back({{"channel", channel_name(f.channel)},
                        {"value", f.value}});
  return nlohmann::json{{"kind", kGrammarKind},
                        {"features", features},
                        {"feature_space_id", to_hex(inv.fingerprint())}};
}

FeatureSpace feature_space_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == kTfidfKind) {
    TfidfVocabulary vocab;
    vocab.casing = casing_from_string(j.at("casing").get<std::string>());
    vocab.max_features = j.at("max_features").get<std::size_t>();
    vocab.ngram_max = j.at("ngram_max").get<int>();
    vocab.corpus_size = j.at("corpus_size").get<std::size_t>();
    vocab.terms = j.at("terms").get<std::vector<std::string>>();
    vocab.doc_freq = j.at("doc_freq").get<std::vector<std::size_t>>();
    if (vocab.terms.size() != vocab.doc_freq.size())
      throw DataError("feature space file: terms/doc_freq length mismatch");
    vocab.rebuild_index();
    return vocab;
  }
  if (kind == kGrammarKind) {
    GrammarInventory inv;
    for (const auto& f : j.at("features")) {
      inv.features.push_back(
          {channel_from_string(f.at("channel").get<std::string>()),
           f.at("value").get<std::string>()});
    }
    inv.rebuild_index();
    return inv;
  }
  throw DataError("unknown feature space kind '" + kind + "'");
}

nlohmann::json to_json(const LogRegModel& model) {
  return nlohmann::json{{"weights", model.weights},
                        {"bias", model.bias},
                        {"lambda", model.lambda},
                        {"threshold", model.threshold},
                        {"feature_space_id", model.feature_space_id},
                        {"max_iter", model.max_iter},
                        {"tol", model.tol},
                        {"iterations", model.iterations},
                        {"final_grad_norm", model.final_grad_norm},
                        {"final_loss", model.final_loss},
                        {"converged", model.converged}};
}

LogRegModel model_from_json(const nlohmann::json& j) {
  LogRegModel model;
  model.weights = j.at("weights").get<std::vector<double>>();
  model.bias = j.at("bias").get<double>();
  model.lambda = j.at("lambda").get<double>();
  model.threshold = j.at("threshold").get<double>();
  model.feature_space_id = j.at("feature_space_id").get<std::string>();
  model.max_iter = j.at("max_iter").get<std::size_t>();
  model.tol = j.at("tol").get<double>();
  model.iterations = j.at("iterations").get<std::size_t>();
  model.final_grad_norm = j.at("final_grad_norm").get<double>();
  model.final_loss = j.at("final_loss").get<double>();
  model.converged = j.at("converged").get<bool>();
  for (double w : model.weights)
    if (!std::isfinite(w)) throw DataError("model file has non-finite weights");
  if (!(model.threshold >= 0.0 && model.threshold <= 1.0))
    throw DataError("model threshold must lie in [0, 1]");
  return model;
}

nlohmann::json to_json(const DatasetStats& stats) {
  return nlohmann::json{{"total_sentences", stats.total_sentences},
                        {"candidate_sentences", stats.candidate_sentences},
                        {"removed_sentences", stats.removed_sentences},
                        {"retained_sentences", stats.retained_sentences},
                        {"positive_sentences", stats.positive_sentences}};
}

nlohmann::json to_json(const SplitReport& report) {
  return nlohmann::json{
      {"run_label", report.run_label},
      {"setting", report.setting},
      {"counts",
       {{"n_random", report.n_random},
        {"n_nlvc", report.n_nlvc},
        {"n_lvc", report.n_lvc},
        {"correct_random", report.correct_random},
        {"correct_nlvc", report.correct_nlvc},
        {"correct_lvc", report.correct_lvc},
        {"tp", report.tp()},
        {"fp", report.fp()},
        {"fp_random", report.fp_random()},
        {"fp_nlvc", report.fp_nlvc()},
        {"fn", report.fn()}}},
      {"percent",
       {{"random", round_half_up_1dp(report.random_pct())},
        {"nlvc", round_half_up_1dp(report.nlvc_pct())},
        {"lvc", round_half_up_1dp(report.lvc_pct())},
        {"overall", round_half_up_1dp(report.overall_pct())},
        {"precision", round_half_up_1dp(report.precision_pct())},
        {"recall", round_half_up_1dp(report.recall_pct())}}}};
}

SplitReport report_from_json(const nlohmann::json& j) {
  SplitReport report;
  report.run_label = j.at("run_label").get<std::string>();
  report.setting = j.value("setting", std::string());
  const auto& counts = j.at("counts");
  report.n_random = counts.at("n_random").get<std::size_t>();
  report.n_nlvc = counts.at("n_nlvc").get<std::size_t>();
  report.n_lvc = counts.at("n_lvc").get<std::size_t>();
  report.correct_random = counts.at("correct_random").get<std::size_t>();
  report.correct_nlvc = counts.at("correct_nlvc").get<std::size_t>();
  report.correct_lvc = counts.at("correct_lvc").get<std::size_t>();
  if (report.correct_random > report.n_random ||
      report.correct_nlvc > report.n_nlvc ||
      report.correct_lvc > report.n_lvc)
    throw DataError("report file: correct counts exceed condition sizes");
  return report;
}

void write_dataset_jsonl(const std::vector<LabeledSentence>& sentences,
                         const std::string& path,
                         const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset: " + path);
  out << nlohmann::json{{"_meta", {{"config_hash", config_hash}}}}.dump()
      << "\n";
  for (const LabeledSentence& s : sentences) {
    nlohmann::json cands = nlohmann::json::array();
    for (const CandidateKey& key : s.candidates)
      cands.push_back({{"dep_id", key.dep_id}, {"head_id", key.head_id}});
    out << nlohmann::json{{"treebank", s.treebank},
                          {"sent_id", s.sent_id},
                          {"surface_text", s.surface_text},
                          {"lemmas", s.lemmas},
                          {"label", s.label},
                          {"candidates", cands}}
               .dump()
        << "\n";
  }
  if (!out) throw DataError("I/O failure writing dataset: " + path);
}

std::vector<LabeledSentence> read_dataset_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset: " + path);
  std::vector<LabeledSentence> sentences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + " line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    if (j.contains("_meta")) continue;
    LabeledSentence s;
    try {
      s.treebank = j.at("treebank").get<std::string>();
      s.sent_id = j.at("sent_id").get<std::string>();
      s.surface_text = j.value("surface_text", std::string());
      s.lemmas = j.at("lemmas").get<std::vector<std::string>>();
      s.label = j.at("label").get<int>();
      for (const auto& c : j.value("candidates", nlohmann::json::array())) {
        s.candidates.push_back({s.treebank, s.sent_id,
                                c.at("dep_id").get<int>(),
                                c.at("head_id").get<int>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + " line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    if (s.label != 0 && s.label != 1)
      throw DataError(path + " line " + std::to_string(line_no) +
                      ": label must be 0 or 1");
    if ((s.label == 1) != !s.candidates.empty())
      throw DataError(path + " line " + std::to_string(line_no) +
                      ": label must be 1 iff candidates are present");
    sentences.push_back(std::move(s));
  }
  return sentences;
}

std::vector<DiagnosticItem> read_diagnostic_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open diagnostic set: " + path);
  std::vector<DiagnosticItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + " line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    if (j.contains("_meta")) continue;
    DiagnosticItem item;
    try {
      item.item_id = j.at("item_id").get<std::string>();
      item.surface_text = j.at("surface_text").get<std::string>();
      item.condition =
          condition_from_string(j.at("condition").get<std::string>());
      if (j.contains("lemma_text"))
        item.lemma_text = j.at("lemma_text").get<std::vector<std::string>>();
      if (j.contains("conllu_ref"))
        item.conllu_ref = j.at("conllu_ref").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + " line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    items.push_back(std::move(item));
  }
  return items;
}

void write_diagnostic_jsonl(const std::vector<DiagnosticItem>& items,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write diagnostic set: " + path);
  for (const DiagnosticItem& item : items) {
    nlohmann::json j{{"item_id", item.item_id},
                     {"surface_text", item.surface_text},
                     {"condition", condition_name(item.condition)}};
    if (item.lemma_text) j["lemma_text"] = *item.lemma_text;
    if (item.conllu_ref) j["conllu_ref"] = *item.conllu_ref;
    out << j.dump() << "\n";
  }
  if (!out) throw DataError("I/O failure writing diagnostic set: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw DataError("I/O failure writing file: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
  if (!out) throw DataError("I/O failure writing file: " + path);
}

}  // namespace lvc
