#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvckit/textnorm.hpp"

namespace lvc {

enum class Representation { LemmaTfidf, Grammar };
enum class CalibrationMode { None, MaxF1, PrecisionFloor };

Representation representation_from_string(std::string_view name);
std::string_view representation_name(Representation r);
CalibrationMode calibration_mode_from_string(std::string_view name);
std::string_view calibration_mode_name(CalibrationMode m);

// One experiment, one document: every stage reads the same resolved config
// and every artifact embeds its hash.
struct ExperimentConfig {
  // [data]
  std::vector<std::string> treebank_paths;
  std::string review_sheet;
  std::string dataset_path;
  bool strict_parse = false;

  // [features]
  Representation representation = Representation::LemmaTfidf;
  Casing casing = Casing::Standard;
  std::size_t max_features = 5000;
  int ngram_max = 2;

  // [train]
  double lambda = 1.0;
  std::optional<std::size_t> max_iter;  // unset: 1000 lemma / 2000 grammar
  double tol = 1e-6;
  double train_fraction = 0.8;
  std::uint64_t seed = 1;

  // [calibrate]
  CalibrationMode calibration = CalibrationMode::MaxF1;
  double precision_floor = 0.8;

  // [diagnostic]
  std::string diagnostic_items;
  std::string diagnostic_conllu;
  std::size_t per_condition = 0;  // 0: only require balanced conditions

  // [output]
  std::string output_dir = "out";
  std::string run_label = "run";

  std::size_t effective_max_iter() const;
  std::string review_sheet_path() const;
  std::string dataset_file_path() const;

  // Sorted key=value lines of the resolved config; the hash every artifact
  // embeds is the FNV-1a of this string.
  std::string canonical_string() const;
  std::string hash() const;
};

// Flat TOML subset: [section] headers, key = value with strings, numbers,
// booleans and string arrays, # comments.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace lvc
