#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lvckit/config.hpp"
#include "lvckit/eval.hpp"

namespace lvc {

// Pipeline stages behind the CLI subcommands. Each stage writes its
// artifacts under config.output_dir; every artifact embeds the config
// hash. All stages are deterministic: identical inputs and config give
// byte-identical outputs.

// Mines candidates and writes the review sheet plus extraction stats.
void cmd_extract(const ExperimentConfig& config);

// Applies review decisions and writes the labeled dataset plus accounting
// stats.
void cmd_build(const ExperimentConfig& config);

// Fits the feature space on the train split only, trains the classifier,
// and writes feature_space.json, model.json and heldout_metrics.json.
void cmd_train(const ExperimentConfig& config);

// Sweeps thresholds on the held-out split, writes sweep.csv and
// model_calibrated.json with the selected tau.
void cmd_calibrate(const ExperimentConfig& config);

// Scores the diagnostic set with the model (or an imported prediction
// file) and writes report.txt / report.json. Returns the report.
SplitReport cmd_evaluate(const ExperimentConfig& config,
                         const std::string& model_path = {},
                         const std::string& predictions_path = {},
                         std::ostream* text_out = nullptr);

// Renders previously written report JSON files as one table.
std::string cmd_report(const std::vector<std::string>& report_paths,
                       ReportFormat format);

}  // namespace lvc
