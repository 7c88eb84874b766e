#include "lvckit/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lvckit/errors.hpp"
#include "lvckit/hash.hpp"

namespace lvc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Strips an unquoted-# comment; quoted strings may contain '#'.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

struct TomlValue {
  std::string raw;           // trimmed scalar text ("" for arrays)
  bool quoted = false;
  std::vector<std::string> array;
  bool is_array = false;
  std::size_t line = 0;
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string parse_quoted(std::string_view s, std::size_t line) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"')
    fail(line, "malformed string literal " + std::string(s));
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\' && i + 2 < s.size()) {
      ++i;
      switch (s[i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(line, std::string("unsupported escape \\") + s[i]);
      }
    } else {
      out += s[i];
    }
  }
  return out;
}

TomlValue parse_value(std::string_view raw, std::size_t line) {
  TomlValue v;
  v.line = line;
  raw = trim(raw);
  if (raw.empty()) fail(line, "missing value");
  if (raw.front() == '[') {
    if (raw.back() != ']') fail(line, "unterminated array");
    v.is_array = true;
    std::string_view body = trim(raw.substr(1, raw.size() - 2));
    while (!body.empty()) {
      std::size_t end = 0;
      if (body.front() != '"')
        fail(line, "arrays may contain only quoted strings");
      end = body.find('"', 1);
      if (end == std::string_view::npos) fail(line, "unterminated string");
      v.array.push_back(parse_quoted(body.substr(0, end + 1), line));
      body = trim(body.substr(end + 1));
      if (!body.empty()) {
        if (body.front() != ',') fail(line, "expected ',' in array");
        body = trim(body.substr(1));
      }
    }
    return v;
  }
  if (raw.front() == '"') {
    v.quoted = true;
    v.raw = parse_quoted(raw, line);
    return v;
  }
  v.raw = std::string(raw);
  return v;
}

class ConfigReader {
 public:
  explicit ConfigReader(std::string_view text) {
    std::string section;
    std::size_t line_no = 0;
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
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      line = trim(strip_comment(line));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "malformed section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) fail(line_no, "expected key = value");
      std::string key = std::string(trim(line.substr(0, eq)));
      if (key.empty()) fail(line_no, "empty key");
      const std::string full = section.empty() ? key : section + "." + key;
      if (values_.count(full)) fail(line_no, "duplicate key " + full);
      values_.emplace(full, parse_value(line.substr(eq + 1), line_no));
    }
  }

  const TomlValue* find(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return nullptr;
    consumed_.insert(key);
    return &it->second;
  }

  std::string str(const std::string& key, const std::string& fallback) {
    const TomlValue* v = find(key);
    if (!v) return fallback;
    if (v->is_array) fail(v->line, key + " must be a string");
    return v->raw;
  }

  bool boolean(const std::string& key, bool fallback) {
    const TomlValue* v = find(key);
    if (!v) return fallback;
    if (v->raw == "true") return true;
    if (v->raw == "false") return false;
    fail(v->line, key + " must be true or false");
  }

  double number(const std::string& key, double fallback) {
    const TomlValue* v = find(key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const double d = std::stod(v->raw, &used);
      if (used != v->raw.size()) throw std::invalid_argument(v->raw);
      return d;
    } catch (const std::exception&) {
      fail(v->line, key + " must be a number, got '" + v->raw + "'");
    }
  }

  std::uint64_t uinteger(const std::string& key, std::uint64_t fallback) {
    const TomlValue* v = find(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    const auto* begin = v->raw.data();
    const auto* end = begin + v->raw.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end)
      fail(v->line, key + " must be a non-negative integer");
    return out;
  }

  std::vector<std::string> strings(const std::string& key) {
    const TomlValue* v = find(key);
    if (!v) return {};
    if (!v->is_array) fail(v->line, key + " must be an array of strings");
    return v->array;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : values_) {
      if (!consumed_.count(key))
        fail(value.line, "unknown config key '" + key + "'");
    }
  }

 private:
  std::map<std::string, TomlValue> values_;
  std::set<std::string> consumed_;
};

std::string quote_list(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

}  // namespace

Representation representation_from_string(std::string_view name) {
  if (name == "lemma_tfidf") return Representation::LemmaTfidf;
  if (name == "grammar") return Representation::Grammar;
  throw ConfigError("unknown representation '" + std::string(name) +
                    "' (expected lemma_tfidf|grammar)");
}

std::string_view representation_name(Representation r) {
  return r == Representation::LemmaTfidf ? "lemma_tfidf" : "grammar";
}

CalibrationMode calibration_mode_from_string(std::string_view name) {
  if (name == "none") return CalibrationMode::None;
  if (name == "max_f1") return CalibrationMode::MaxF1;
  if (name == "precision_floor") return CalibrationMode::PrecisionFloor;
  throw ConfigError("unknown calibration mode '" + std::string(name) +
                    "' (expected none|max_f1|precision_floor)");
}

std::string_view calibration_mode_name(CalibrationMode m) {
  switch (m) {
    case CalibrationMode::None: return "none";
    case CalibrationMode::MaxF1: return "max_f1";
    case CalibrationMode::PrecisionFloor: return "precision_floor";
  }
  return "none";
}

std::size_t ExperimentConfig::effective_max_iter() const {
  if (max_iter) return *max_iter;
  return representation == Representation::Grammar ? 2000 : 1000;
}

std::string ExperimentConfig::review_sheet_path() const {
  return review_sheet.empty() ? output_dir + "/review_sheet.tsv" : review_sheet;
}

std::string ExperimentConfig::dataset_file_path() const {
  return dataset_path.empty() ? output_dir + "/dataset.jsonl" : dataset_path;
}

std::string ExperimentConfig::canonical_string() const {
  std::ostringstream out;
  out << "calibrate.mode=" << calibration_mode_name(calibration) << "\n"
      << "calibrate.precision_floor=" << precision_floor << "\n"
      << "data.dataset=" << dataset_file_path() << "\n"
      << "data.review_sheet=" << review_sheet_path() << "\n"
      << "data.strict_parse=" << (strict_parse ? "true" : "false") << "\n"
      << "data.treebanks=" << quote_list(treebank_paths) << "\n"
      << "diagnostic.conllu=" << diagnostic_conllu << "\n"
      << "diagnostic.items=" << diagnostic_items << "\n"
      << "diagnostic.per_condition=" << per_condition << "\n"
      << "features.casing=" << casing_name(casing) << "\n"
      << "features.max_features=" << max_features << "\n"
      << "features.ngram_max=" << ngram_max << "\n"
      << "features.representation=" << representation_name(representation)
      << "\n"
      << "output.dir=" << output_dir << "\n"
      << "output.run_label=" << run_label << "\n"
      << "train.lambda=" << lambda << "\n"
      << "train.max_iter=" << effective_max_iter() << "\n"
      << "train.seed=" << seed << "\n"
      << "train.tol=" << tol << "\n"
      << "train.train_fraction=" << train_fraction << "\n";
  return out.str();
}

std::string ExperimentConfig::hash() const {
  return to_hex(fnv1a64(canonical_string()));
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  ConfigReader reader(text);
  ExperimentConfig cfg;
  cfg.treebank_paths = reader.strings("data.treebanks");
  cfg.review_sheet = reader.str("data.review_sheet", "");
  cfg.dataset_path = reader.str("data.dataset", "");
  cfg.strict_parse = reader.boolean("data.strict_parse", false);

  cfg.representation = representation_from_string(
      reader.str("features.representation", "lemma_tfidf"));
  cfg.casing = casing_from_string(reader.str("features.casing", "standard"));
  cfg.max_features =
      static_cast<std::size_t>(reader.uinteger("features.max_features", 5000));
  cfg.ngram_max = static_cast<int>(reader.uinteger("features.ngram_max", 2));

  cfg.lambda = reader.number("train.lambda", 1.0);
  if (reader.find("train.max_iter") == nullptr) {
    cfg.max_iter.reset();
  } else {
    cfg.max_iter = static_cast<std::size_t>(
        reader.uinteger("train.max_iter", 0));
  }
  cfg.tol = reader.number("train.tol", 1e-6);
  cfg.train_fraction = reader.number("train.train_fraction", 0.8);
  cfg.seed = reader.uinteger("train.seed", 1);

  cfg.calibration = calibration_mode_from_string(
      reader.str("calibrate.mode", "max_f1"));
  cfg.precision_floor = reader.number("calibrate.precision_floor", 0.8);

  cfg.diagnostic_items = reader.str("diagnostic.items", "");
  cfg.diagnostic_conllu = reader.str("diagnostic.conllu", "");
  cfg.per_condition =
      static_cast<std::size_t>(reader.uinteger("diagnostic.per_condition", 0));

  cfg.output_dir = reader.str("output.dir", "out");
  cfg.run_label = reader.str("output.run_label", "run");
  reader.reject_unknown();

  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
    throw ConfigError("train_fraction must lie strictly between 0 and 1");
  if (!(cfg.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (cfg.ngram_max < 1 || cfg.ngram_max > 2)
    throw ConfigError("ngram_max must be 1 or 2");
  if (cfg.max_features == 0)
    throw ConfigError("max_features must be positive");
  if (!(cfg.precision_floor > 0.0 && cfg.precision_floor <= 1.0))
    throw ConfigError("precision_floor must lie in (0, 1]");
  if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

}  // namespace lvc
