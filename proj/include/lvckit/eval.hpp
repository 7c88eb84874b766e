#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lvc {

enum class Condition { Random, Nlvc, Lvc };

Condition condition_from_string(std::string_view name);  // "Random"|"NLVC"|"LVC"
std::string_view condition_name(Condition c);
int gold_label(Condition c);  // LVC -> 1, others -> 0

struct DiagnosticItem {
  std::string item_id;
  std::string surface_text;
  Condition condition = Condition::Random;
  std::optional<std::vector<std::string>> lemma_text;
  std::optional<std::string> conllu_ref;  // sentence key into a companion file

  int gold() const { return gold_label(condition); }
};

// Checks id uniqueness and balanced conditions; when per_condition is
// given, each condition must have exactly that many items (49 in the
// canonical shape, smaller for mocks).
void validate_diagnostic_set(const std::vector<DiagnosticItem>& items,
                             std::optional<std::size_t> per_condition = {});

struct ThresholdPoint {
  double tau = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  // 0 when the denominator is zero.
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// Exact sweep under "predict 1 iff p >= tau". Candidate taus: 0, every
// distinct score, the midpoints of consecutive distinct scores, and 1;
// returned ascending. This covers every achievable confusion matrix.
std::vector<ThresholdPoint> pr_sweep(const std::vector<double>& scores,
                                     const std::vector<int>& gold);

// Largest tau among F1 maximizers (the most conservative choice).
double select_tau_max_f1(const std::vector<ThresholdPoint>& points);

struct TauSelection {
  double tau = 0.0;
  bool floor_met = true;
};

// Smallest tau with precision >= floor and tp > 0; when no point
// qualifies, the precision maximizer (ties -> largest tau) flagged
// floor_met = false.
TauSelection select_tau_precision_floor(const std::vector<ThresholdPoint>& points,
                                        double floor);

// Split-wise diagnostic report. Raw counts are the source of truth;
// percentages are derived and rounded only at presentation time.
struct SplitReport {
  std::string run_label;
  std::string setting;  // rendered as "--" when empty
  std::size_t n_random = 0, n_nlvc = 0, n_lvc = 0;
  std::size_t correct_random = 0, correct_nlvc = 0, correct_lvc = 0;

  std::size_t total() const { return n_random + n_nlvc + n_lvc; }
  std::size_t correct_total() const {
    return correct_random + correct_nlvc + correct_lvc;
  }
  std::size_t tp() const { return correct_lvc; }
  // Pooled errors: FP counts mistakes on Random+NLVC, FN mistakes on LVC.
  // The per-condition decomposition is reported alongside, never instead.
  std::size_t fp() const { return fp_random() + fp_nlvc(); }
  std::size_t fp_random() const { return n_random - correct_random; }
  std::size_t fp_nlvc() const { return n_nlvc - correct_nlvc; }
  std::size_t fn() const { return n_lvc - correct_lvc; }

  double random_pct() const;
  double nlvc_pct() const;
  double lvc_pct() const;
  double overall_pct() const;
  double precision_pct() const;  // LVC positive, Random+NLVC pooled negative
  double recall_pct() const;     // equals lvc_pct by construction
};

// Half-up rounding to one decimal, the presentation rule for all percent
// columns.
double round_half_up_1dp(double pct);
std::string format_pct_1dp(double pct);

SplitReport evaluate_split(const std::map<std::string, int>& preds,
                           const std::vector<DiagnosticItem>& items,
                           const std::string& run_label,
                           const std::string& setting = {});

struct Prediction {
  int label = 0;
  std::optional<double> score;
};

// TSV with header: item_id, pred (0|1), optional score.
std::map<std::string, Prediction> import_predictions(std::string_view text);
std::map<std::string, Prediction> import_predictions_file(
    const std::string& path);
std::map<std::string, int> prediction_labels(
    const std::map<std::string, Prediction>& preds);

enum class ReportFormat { Text, Json };

// Text: aligned table in the order Model, Setting, Random, NLVC, LVC,
// Overall, FP, FN, Prec, Rec. Json: raw counts plus rounded percentages.
std::string render_report(const std::vector<SplitReport>& reports,
                          ReportFormat format);

std::string sweep_to_csv(const std::vector<ThresholdPoint>& points,
                         const std::string& header_comment = {});

}  // namespace lvc
