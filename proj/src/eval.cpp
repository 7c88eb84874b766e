#include "lvckit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lvckit/errors.hpp"
#include "lvckit/persist.hpp"

namespace lvc {

namespace {

double ratio_pct(std::size_t num, std::size_t den) {
  if (den == 0) return 0.0;
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

ThresholdPoint confusion_at(double tau, const std::vector<double>& sorted_scores,
                            const std::vector<std::size_t>& pos_suffix,
                            std::size_t n_pos) {
  const std::size_t n = sorted_scores.size();
  const auto it = std::lower_bound(sorted_scores.begin(), sorted_scores.end(), tau);
  const std::size_t idx = static_cast<std::size_t>(it - sorted_scores.begin());
  const std::size_t predicted = n - idx;
  ThresholdPoint pt;
  pt.tau = tau;
  pt.tp = pos_suffix[idx];
  pt.fp = predicted - pt.tp;
  pt.fn = n_pos - pt.tp;
  pt.tn = (n - n_pos) - pt.fp;
  pt.precision = (pt.tp + pt.fp) > 0
                     ? static_cast<double>(pt.tp) /
                           static_cast<double>(pt.tp + pt.fp)
                     : 0.0;
  pt.recall = n_pos > 0
                  ? static_cast<double>(pt.tp) / static_cast<double>(n_pos)
                  : 0.0;
  pt.f1 = (pt.precision + pt.recall) > 0.0
              ? 2.0 * pt.precision * pt.recall / (pt.precision + pt.recall)
              : 0.0;
  return pt;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Condition condition_from_string(std::string_view name) {
  if (name == "Random") return Condition::Random;
  if (name == "NLVC") return Condition::Nlvc;
  if (name == "LVC") return Condition::Lvc;
  throw DataError("unknown condition '" + std::string(name) +
                  "' (expected Random|NLVC|LVC)");
}

std::string_view condition_name(Condition c) {
  switch (c) {
    case Condition::Random: return "Random";
    case Condition::Nlvc: return "NLVC";
    case Condition::Lvc: return "LVC";
  }
  return "Random";
}

int gold_label(Condition c) { return c == Condition::Lvc ? 1 : 0; }

void validate_diagnostic_set(const std::vector<DiagnosticItem>& items,
                             std::optional<std::size_t> per_condition) {
  if (items.empty()) throw DataError("diagnostic set is empty");
  std::set<std::string> ids;
  std::size_t counts[3] = {0, 0, 0};
  for (const DiagnosticItem& item : items) {
    if (!ids.insert(item.item_id).second)
      throw DataError("duplicate diagnostic item id '" + item.item_id + "'");
    ++counts[static_cast<int>(item.condition)];
  }
  if (per_condition) {
    for (int c = 0; c < 3; ++c) {
      if (counts[c] != *per_condition)
        throw DataError(
            std::string("condition ") +
            std::string(condition_name(static_cast<Condition>(c))) + " has " +
            std::to_string(counts[c]) + " items, expected " +
            std::to_string(*per_condition));
    }
  } else if (counts[0] != counts[1] || counts[1] != counts[2]) {
    throw DataError("diagnostic conditions are unbalanced: Random " +
                    std::to_string(counts[0]) + ", NLVC " +
                    std::to_string(counts[1]) + ", LVC " +
                    std::to_string(counts[2]));
  }
}

std::vector<ThresholdPoint> pr_sweep(const std::vector<double>& scores,
                                     const std::vector<int>& gold) {
  if (scores.empty()) throw DataError("cannot sweep an empty score list");
  if (scores.size() != gold.size())
    throw DataError("score/label count mismatch");
  for (double s : scores)
    if (!std::isfinite(s)) throw DataError("non-finite score in sweep input");

  std::vector<std::pair<double, int>> order(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    order[i] = {scores[i], gold[i]};
  std::sort(order.begin(), order.end());

  std::vector<double> sorted_scores(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    sorted_scores[i] = order[i].first;
  // pos_suffix[i] = positives among scores[i..n)
  std::vector<std::size_t> pos_suffix(order.size() + 1, 0);
  for (std::size_t i = order.size(); i-- > 0;)
    pos_suffix[i] = pos_suffix[i + 1] +
                    static_cast<std::size_t>(order[i].second == 1);
  const std::size_t n_pos = pos_suffix[0];

  std::vector<double> taus;
  taus.push_back(0.0);
  taus.push_back(1.0);
  for (std::size_t i = 0; i < sorted_scores.size(); ++i) {
    if (i > 0 && sorted_scores[i] == sorted_scores[i - 1]) continue;
    taus.push_back(sorted_scores[i]);
    std::size_t j = i + 1;
    while (j < sorted_scores.size() && sorted_scores[j] == sorted_scores[i]) ++j;
    if (j < sorted_scores.size())
      taus.push_back(0.5 * (sorted_scores[i] + sorted_scores[j]));
  }
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

  std::vector<ThresholdPoint> points;
  points.reserve(taus.size());
  for (double tau : taus)
    points.push_back(confusion_at(tau, sorted_scores, pos_suffix, n_pos));
  return points;
}

double select_tau_max_f1(const std::vector<ThresholdPoint>& points) {
  if (points.empty()) throw DataError("empty threshold sweep");
  double best_f1 = -1.0;
  double best_tau = 0.0;
  for (const ThresholdPoint& pt : points) {
    if (pt.f1 >= best_f1) {  // ties resolve to the largest tau
      best_f1 = pt.f1;
      best_tau = pt.tau;
    }
  }
  return best_tau;
}

TauSelection select_tau_precision_floor(
    const std::vector<ThresholdPoint>& points, double floor) {
  if (points.empty()) throw DataError("empty threshold sweep");
  if (!(floor >= 0.0 && floor <= 1.0))
    throw ConfigError("precision floor must lie in [0, 1]");
  for (const ThresholdPoint& pt : points) {
    if (pt.tp > 0 && pt.precision >= floor) return {pt.tau, true};
  }
  double best_precision = -1.0;
  double best_tau = 0.0;
  for (const ThresholdPoint& pt : points) {
    if (pt.precision >= best_precision) {
      best_precision = pt.precision;
      best_tau = pt.tau;
    }
  }
  return {best_tau, false};
}

double SplitReport::random_pct() const { return ratio_pct(correct_random, n_random); }
double SplitReport::nlvc_pct() const { return ratio_pct(correct_nlvc, n_nlvc); }
double SplitReport::lvc_pct() const { return ratio_pct(correct_lvc, n_lvc); }
double SplitReport::overall_pct() const {
  return ratio_pct(correct_total(), total());
}
double SplitReport::precision_pct() const {
  return ratio_pct(tp(), tp() + fp());
}
double SplitReport::recall_pct() const { return ratio_pct(tp(), n_lvc); }

double round_half_up_1dp(double pct) {
  return std::floor(pct * 10.0 + 0.5) / 10.0;
}

std::string format_pct_1dp(double pct) {
  const long long tenths = static_cast<long long>(std::floor(pct * 10.0 + 0.5));
  std::string out = std::to_string(tenths / 10);
  out += '.';
  out += static_cast<char>('0' + std::llabs(tenths % 10));
  return out;
}

SplitReport evaluate_split(const std::map<std::string, int>& preds,
                           const std::vector<DiagnosticItem>& items,
                           const std::string& run_label,
                           const std::string& setting) {
  std::vector<std::string> missing;
  std::set<std::string> item_ids;
  for (const DiagnosticItem& item : items) {
    item_ids.insert(item.item_id);
    if (!preds.count(item.item_id)) missing.push_back(item.item_id);
  }
  std::vector<std::string> extra;
  for (const auto& [id, label] : preds)
    if (!item_ids.count(id)) extra.push_back(id);
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "prediction coverage mismatch;";
    if (!missing.empty()) {
      msg += " missing:";
      for (const std::string& id : missing) msg += " " + id;
    }
    if (!extra.empty()) {
      msg += " extra:";
      for (const std::string& id : extra) msg += " " + id;
    }
    throw DataError(msg);
  }

  SplitReport report;
  report.run_label = run_label;
  report.setting = setting;
  for (const DiagnosticItem& item : items) {
    const int pred = preds.at(item.item_id);
    if (pred != 0 && pred != 1)
      throw DataError("prediction for '" + item.item_id + "' is not binary");
    const bool correct = pred == item.gold();
    switch (item.condition) {
      case Condition::Random:
        ++report.n_random;
        report.correct_random += correct;
        break;
      case Condition::Nlvc:
        ++report.n_nlvc;
        report.correct_nlvc += correct;
        break;
      case Condition::Lvc:
        ++report.n_lvc;
        report.correct_lvc += correct;
        break;
    }
  }
  return report;
}

std::map<std::string, Prediction> import_predictions(std::string_view text) {
  std::map<std::string, Prediction> preds;
  bool header_seen = false;
  bool has_score = false;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line;
    if (eol == std::string_view::npos) {
      if (pos >= text.size()) break;
      line = text.substr(pos);
      pos = text.size() + 1;
    } else {
      line = text.substr(pos, eol - pos);
      pos = eol + 1;
    }
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      if (tab == std::string_view::npos) {
        cols.emplace_back(line.substr(start));
        break;
      }
      cols.emplace_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (!header_seen) {
      if (cols.size() < 2 || cols[0] != "item_id" || cols[1] != "pred")
        throw DataError("predictions file: header must be item_id<TAB>pred"
                        "[<TAB>score]");
      if (cols.size() >= 3 && cols[2] == "score") has_score = true;
      header_seen = true;
      continue;
    }
    if (cols.size() < 2)
      throw DataError("predictions row " + std::to_string(row) +
                      ": expected at least 2 columns");
    Prediction p;
    if (cols[1] == "0")
      p.label = 0;
    else if (cols[1] == "1")
      p.label = 1;
    else
      throw DataError("predictions row " + std::to_string(row) +
                      ": pred must be 0 or 1, got '" + cols[1] + "'");
    if (has_score && cols.size() >= 3 && !cols[2].empty()) {
      try {
        std::size_t used = 0;
        p.score = std::stod(cols[2], &used);
        if (used != cols[2].size()) throw std::invalid_argument(cols[2]);
      } catch (const std::exception&) {
        throw DataError("predictions row " + std::to_string(row) +
                        ": bad score '" + cols[2] + "'");
      }
    }
    if (!preds.emplace(cols[0], p).second)
      throw DataError("duplicate prediction for item '" + cols[0] + "'");
  }
  if (!header_seen)
    throw DataError("predictions file: missing header row");
  return preds;
}

std::map<std::string, Prediction> import_predictions_file(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open predictions file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return import_predictions(buf.str());
}

std::map<std::string, int> prediction_labels(
    const std::map<std::string, Prediction>& preds) {
  std::map<std::string, int> labels;
  for (const auto& [id, p] : preds) labels.emplace(id, p.label);
  return labels;
}

std::string render_report(const std::vector<SplitReport>& reports,
                          ReportFormat format) {
  if (reports.empty()) throw DataError("no reports to render");
  if (format == ReportFormat::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SplitReport& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
  }

  const std::vector<std::string> header = {"Model", "Setting", "Random",
                                           "NLVC",  "LVC",     "Overall",
                                           "FP",    "FN",      "Prec",
                                           "Rec"};
  std::vector<std::vector<std::string>> rows;
  rows.push_back(header);
  for (const SplitReport& r : reports) {
    rows.push_back({r.run_label.empty() ? "--" : r.run_label,
                    r.setting.empty() ? "--" : r.setting,
                    format_pct_1dp(r.random_pct()),
                    format_pct_1dp(r.nlvc_pct()),
                    format_pct_1dp(r.lvc_pct()),
                    format_pct_1dp(r.overall_pct()),
                    std::to_string(r.fp()),
                    std::to_string(r.fn()),
                    format_pct_1dp(r.precision_pct()),
                    format_pct_1dp(r.recall_pct())});
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      if (c + 1 < row.size())
        out += std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

std::string sweep_to_csv(const std::vector<ThresholdPoint>& points,
                         const std::string& header_comment) {
  std::string out;
  if (!header_comment.empty()) out += "# " + header_comment + "\n";
  out += "tau,tp,fp,fn,tn,precision,recall,f1\n";
  for (const ThresholdPoint& pt : points) {
    out += format_double(pt.tau) + "," + std::to_string(pt.tp) + "," +
           std::to_string(pt.fp) + "," + std::to_string(pt.fn) + "," +
           std::to_string(pt.tn) + "," + format_double(pt.precision) + "," +
           format_double(pt.recall) + "," + format_double(pt.f1) + "\n";
  }
  return out;
}

}  // namespace lvc
