#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lvckit/eval.hpp"
#include "lvckit/featurize.hpp"
#include "lvckit/logreg.hpp"
#include "lvckit/supervision.hpp"

namespace lvc {

using FeatureSpace = std::variant<TfidfVocabulary, GrammarInventory>;

std::string feature_space_id(const FeatureSpace& space);
std::size_t feature_space_dimension(const FeatureSpace& space);

nlohmann::json to_json(const TfidfVocabulary& vocab);
nlohmann::json to_json(const GrammarInventory& inv);
nlohmann::json to_json(const LogRegModel& model);
nlohmann::json to_json(const DatasetStats& stats);
nlohmann::json to_json(const SplitReport& report);

FeatureSpace feature_space_from_json(const nlohmann::json& j);
LogRegModel model_from_json(const nlohmann::json& j);
SplitReport report_from_json(const nlohmann::json& j);

// Labeled dataset JSONL: a leading {"_meta": ...} line carries the config
// hash, then one object per sentence.
void write_dataset_jsonl(const std::vector<LabeledSentence>& sentences,
                         const std::string& path,
                         const std::string& config_hash);
std::vector<LabeledSentence> read_dataset_jsonl(const std::string& path);

// Diagnostic set JSONL: item_id, surface_text, condition, optional
// lemma_text, optional conllu_ref.
std::vector<DiagnosticItem> read_diagnostic_jsonl(const std::string& path);
void write_diagnostic_jsonl(const std::vector<DiagnosticItem>& items,
                            const std::string& path);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lvc
