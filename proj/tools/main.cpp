#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lvckit/commands.hpp"
#include "lvckit/errors.hpp"

namespace {

struct Overrides {
  std::optional<std::string> representation;
  std::optional<std::string> casing;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<std::uint64_t> max_features;
  std::optional<std::string> calibration;
  std::optional<double> precision_floor;
  std::optional<std::string> output_dir;
  std::optional<std::string> run_label;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--representation", ov.representation,
                  "lemma_tfidf or grammar");
  cmd->add_option("--casing", ov.casing, "standard or turkish");
  cmd->add_option("--seed", ov.seed, "split seed");
  cmd->add_option("--lambda", ov.lambda, "L2 strength");
  cmd->add_option("--max-features", ov.max_features, "TF-IDF vocabulary cap");
  cmd->add_option("--calibration", ov.calibration,
                  "none, max_f1 or precision_floor");
  cmd->add_option("--precision-floor", ov.precision_floor,
                  "precision floor for calibration");
  cmd->add_option("--output-dir", ov.output_dir, "artifact directory");
  cmd->add_option("--run-label", ov.run_label, "label for reports");
}

lvc::ExperimentConfig resolve_config(const std::string& config_path,
                                     const Overrides& ov) {
  lvc::ExperimentConfig cfg = lvc::load_experiment_config(config_path);
  if (ov.representation)
    cfg.representation = lvc::representation_from_string(*ov.representation);
  if (ov.casing) cfg.casing = lvc::casing_from_string(*ov.casing);
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.lambda) cfg.lambda = *ov.lambda;
  if (ov.max_features) cfg.max_features = *ov.max_features;
  if (ov.calibration)
    cfg.calibration = lvc::calibration_mode_from_string(*ov.calibration);
  if (ov.precision_floor) cfg.precision_floor = *ov.precision_floor;
  if (ov.output_dir) cfg.output_dir = *ov.output_dir;
  if (ov.run_label) cfg.run_label = *ov.run_label;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lvckit: mine LVC supervision from UD treebanks, train restricted-input "
      "classifiers, and evaluate them split-wise"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::string model_path;
  std::string predictions_path;
  std::vector<std::string> report_files;
  std::string report_format = "text";

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (TOML)")
        ->required();
    add_override_flags(cmd, ov);
    return cmd;
  };

  CLI::App* extract =
      add_config(app.add_subcommand("extract", "mine candidates and write the "
                                               "review sheet"));
  CLI::App* build = add_config(
      app.add_subcommand("build", "apply review and write the labeled dataset"));
  CLI::App* train = add_config(
      app.add_subcommand("train", "fit features and train the classifier"));
  CLI::App* calibrate = add_config(
      app.add_subcommand("calibrate", "sweep thresholds on the held-out split"));
  CLI::App* evaluate = add_config(
      app.add_subcommand("evaluate", "score the diagnostic set"));
  evaluate->add_option("--model", model_path, "model JSON to score with");
  evaluate->add_option("--predictions", predictions_path,
                       "imported prediction TSV instead of a model");
  CLI::App* report =
      app.add_subcommand("report", "render stored report JSON files");
  report->add_option("files", report_files, "report.json files")->required();
  report->add_option("--format", report_format, "text or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*extract) {
      lvc::cmd_extract(resolve_config(config_path, ov));
    } else if (*build) {
      lvc::cmd_build(resolve_config(config_path, ov));
    } else if (*train) {
      lvc::cmd_train(resolve_config(config_path, ov));
    } else if (*calibrate) {
      lvc::cmd_calibrate(resolve_config(config_path, ov));
    } else if (*evaluate) {
      lvc::cmd_evaluate(resolve_config(config_path, ov), model_path,
                        predictions_path, &std::cout);
    } else if (*report) {
      lvc::ReportFormat fmt;
      if (report_format == "text")
        fmt = lvc::ReportFormat::Text;
      else if (report_format == "json")
        fmt = lvc::ReportFormat::Json;
      else
        throw lvc::ConfigError("unknown report format '" + report_format + "'");
      std::cout << lvc::cmd_report(report_files, fmt);
    }
  } catch (const lvc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const lvc::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const lvc::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const lvc::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
