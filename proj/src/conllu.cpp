#include "lvckit/conllu.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "lvckit/errors.hpp"
#include "lvckit/log.hpp"

namespace lvc {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty() || s.size() > 9) return false;  // 9 digits always fit an int
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

// "" on underscore placeholders; FORM keeps "_" verbatim.
std::string unescape_placeholder(std::string_view col) {
  return col == "_" ? std::string() : std::string(col);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Extracts the value of "# key = value" comments (sent_id, text).
bool comment_value(std::string_view comment, std::string_view key,
                   std::string& value) {
  std::string_view body = comment;
  if (body.empty() || body.front() != '#') return false;
  body.remove_prefix(1);
  body = trim(body);
  if (body.substr(0, key.size()) != key) return false;
  body.remove_prefix(key.size());
  body = trim(body);
  if (body.empty() || body.front() != '=') return false;
  body.remove_prefix(1);
  value = std::string(trim(body));
  return true;
}

struct PendingSentence {
  std::vector<std::string> comments;
  std::vector<Token> tokens;
  std::vector<MultiwordRange> ranges;
  bool any_content() const {
    return !comments.empty() || !tokens.empty() || !ranges.empty();
  }
};

class Parser {
 public:
  explicit Parser(const ParseOptions& opts) : opts_(opts) {
    result_.treebank.name = opts.name;
  }

  ParseResult run(std::string_view text) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    // UTF-8 BOM is tolerated on the first line.
    if (text.substr(0, 3) == "\xef\xbb\xbf") pos = 3;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      std::string_view line;
      if (eol == std::string_view::npos) {
        if (pos == text.size()) break;
        line = text.substr(pos);
        pos = text.size() + 1;
      } else {
        line = text.substr(pos, eol - pos);
        pos = eol + 1;
      }
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      handle_line(line, line_no);
    }
    finalize_sentence(line_no);
    return std::move(result_);
  }

 private:
  void fail(std::size_t line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
  }

  void warn(std::size_t line_no, const std::string& what) {
    std::string msg = "line " + std::to_string(line_no) + ": " + what;
    log_warn((opts_.name.empty() ? msg : opts_.name + ": " + msg));
    result_.warnings.push_back(std::move(msg));
  }

  void skip_line(std::size_t line_no, const std::string& what) {
    if (opts_.strict) fail(line_no, what);
    warn(line_no, what + " (line skipped)");
    ++result_.stats.malformed_lines_skipped;
  }

  void handle_line(std::string_view line, std::size_t line_no) {
    if (line.empty()) {
      finalize_sentence(line_no);
      return;
    }
    if (line.front() == '#') {
      pending_.comments.emplace_back(line);
      return;
    }
    const auto cols = split_tabs(line);
    if (cols.size() != 10) {
      skip_line(line_no, "expected 10 tab-separated columns, got " +
                             std::to_string(cols.size()));
      return;
    }
    const std::string_view id = cols[0];
    if (all_digits(id)) {
      parse_token(cols, line_no);
      return;
    }
    const std::size_t dash = id.find('-');
    if (dash != std::string_view::npos && all_digits(id.substr(0, dash)) &&
        all_digits(id.substr(dash + 1))) {
      parse_range(cols, dash, line_no);
      return;
    }
    const std::size_t dot = id.find('.');
    if (dot != std::string_view::npos && all_digits(id.substr(0, dot)) &&
        all_digits(id.substr(dot + 1))) {
      ++result_.stats.empty_nodes_skipped;  // enhanced-only node, dropped
      return;
    }
    skip_line(line_no, "unrecognized token id '" + std::string(id) + "'");
  }

  void parse_token(const std::vector<std::string_view>& cols,
                   std::size_t line_no) {
    Token tok;
    tok.id = to_int(cols[0]);
    if (tok.id < 1) {
      skip_line(line_no, "token id must be >= 1");
      return;
    }
    for (const Token& existing : pending_.tokens) {
      if (existing.id == tok.id) {
        skip_line(line_no, "duplicate token id " + std::to_string(tok.id));
        return;
      }
    }
    tok.form = std::string(cols[1]);
    tok.lemma = unescape_placeholder(cols[2]);
    tok.upos = unescape_placeholder(cols[3]);
    tok.xpos = unescape_placeholder(cols[4]);
    if (cols[5] != "_") {
      std::string_view feats = cols[5];
      std::size_t start = 0;
      while (start <= feats.size()) {
        std::size_t bar = feats.find('|', start);
        std::string_view entry = feats.substr(
            start, bar == std::string_view::npos ? bar : bar - start);
        const std::size_t eq = entry.find('=');
        if (eq == std::string_view::npos || eq == 0 ||
            eq + 1 == entry.size() ||
            entry.find('=', eq + 1) != std::string_view::npos) {
          skip_line(line_no, "malformed FEATS entry '" + std::string(entry) +
                                 "' (need Key=Value)");
          return;
        }
        tok.feats.emplace_back(entry);
        if (bar == std::string_view::npos) break;
        start = bar + 1;
      }
    }
    if (!all_digits(cols[6])) {
      skip_line(line_no, "non-integer head '" + std::string(cols[6]) + "'");
      return;
    }
    tok.head = to_int(cols[6]);
    if (tok.head == tok.id) {
      skip_line(line_no, "token " + std::to_string(tok.id) + " heads itself");
      return;
    }
    tok.deprel = unescape_placeholder(cols[7]);
    tok.deps = unescape_placeholder(cols[8]);
    tok.misc = unescape_placeholder(cols[9]);
    pending_.tokens.push_back(std::move(tok));
  }

  void parse_range(const std::vector<std::string_view>& cols, std::size_t dash,
                   std::size_t line_no) {
    MultiwordRange range;
    range.start = to_int(cols[0].substr(0, dash));
    range.end = to_int(cols[0].substr(dash + 1));
    if (range.start >= range.end || range.start < 1) {
      skip_line(line_no, "invalid multiword range '" + std::string(cols[0]) + "'");
      return;
    }
    range.form = std::string(cols[1]);
    range.misc = unescape_placeholder(cols[9]);
    pending_.ranges.push_back(std::move(range));
  }

  void drop_sentence(std::size_t line_no, const std::string& why) {
    if (opts_.strict) fail(line_no, why);
    warn(line_no, why + " (sentence dropped)");
    ++result_.stats.sentences_dropped;
    pending_ = PendingSentence{};
  }

  void finalize_sentence(std::size_t line_no) {
    if (!pending_.any_content()) return;
    if (pending_.tokens.empty()) {
      drop_sentence(line_no, "sentence without token lines");
      return;
    }
    for (std::size_t i = 0; i < pending_.tokens.size(); ++i) {
      if (pending_.tokens[i].id != static_cast<int>(i) + 1) {
        drop_sentence(line_no, "token ids are not consecutive from 1");
        return;
      }
    }
    const int n = static_cast<int>(pending_.tokens.size());
    int roots = 0;
    for (const Token& tok : pending_.tokens) {
      if (tok.head < 0 || tok.head > n) {
        drop_sentence(line_no, "head " + std::to_string(tok.head) +
                                   " points outside the sentence");
        return;
      }
      if (tok.head == 0) ++roots;
    }
    Sentence sent;
    sent.comments = std::move(pending_.comments);
    sent.tokens = std::move(pending_.tokens);
    sent.ranges = std::move(pending_.ranges);
    pending_ = PendingSentence{};
    if (roots != 1) {
      if (opts_.strict)
        fail(line_no, "sentence has " + std::to_string(roots) +
                          " root tokens (expected 1)");
      sent.root_anomalous = true;
      ++result_.stats.root_anomalies;
      warn(line_no,
           "sentence has " + std::to_string(roots) + " root tokens (flagged)");
    }
    for (const std::string& c : sent.comments) {
      std::string value;
      if (sent.sent_id.empty() && comment_value(c, "sent_id", value))
        sent.sent_id = value;
      else if (sent.text.empty() && comment_value(c, "text", value))
        sent.text = value;
    }
    if (sent.sent_id.empty())
      sent.sent_id = "s" + std::to_string(result_.treebank.sentences.size() + 1);
    if (!seen_ids_.insert(sent.sent_id).second) {
      if (opts_.strict) fail(line_no, "duplicate sent_id '" + sent.sent_id + "'");
      warn(line_no, "duplicate sent_id '" + sent.sent_id + "'");
      ++result_.stats.duplicate_sent_ids;
    }
    ++result_.stats.sentences;
    result_.stats.tokens += sent.tokens.size();
    result_.treebank.sentences.push_back(std::move(sent));
  }

  ParseOptions opts_;
  ParseResult result_;
  PendingSentence pending_;
  std::unordered_set<std::string> seen_ids_;
};

void write_column(std::string& out, const std::string& value) {
  out += value.empty() ? "_" : value;
}

}  // namespace

ParseResult parse_conllu(std::string_view text, const ParseOptions& opts) {
  return Parser(opts).run(text);
}

ParseResult parse_conllu_file(const std::string& path,
                              const ParseOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open treebank file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  ParseOptions effective = opts;
  if (effective.name.empty()) {
    // filename stem
    std::string name = path;
    const std::size_t slash = name.find_last_of("/\\");
    if (slash != std::string::npos) name = name.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    effective.name = name;
  }
  return parse_conllu(buf.str(), effective);
}

std::string serialize_conllu(const Treebank& tb) {
  std::string out;
  for (const Sentence& sent : tb.sentences) {
    for (const std::string& c : sent.comments) {
      out += c;
      out += '\n';
    }
    std::size_t next_range = 0;
    for (const Token& tok : sent.tokens) {
      while (next_range < sent.ranges.size() &&
             sent.ranges[next_range].start <= tok.id) {
        const MultiwordRange& r = sent.ranges[next_range++];
        out += std::to_string(r.start) + "-" + std::to_string(r.end) + "\t";
        write_column(out, r.form);
        out += "\t_\t_\t_\t_\t_\t_\t_\t";
        write_column(out, r.misc);
        out += '\n';
      }
      out += std::to_string(tok.id);
      out += '\t';
      write_column(out, tok.form);
      out += '\t';
      write_column(out, tok.lemma);
      out += '\t';
      write_column(out, tok.upos);
      out += '\t';
      write_column(out, tok.xpos);
      out += '\t';
      if (tok.feats.empty()) {
        out += '_';
      } else {
        for (std::size_t i = 0; i < tok.feats.size(); ++i) {
          if (i) out += '|';
          out += tok.feats[i];
        }
      }
      out += '\t';
      out += std::to_string(tok.head);
      out += '\t';
      write_column(out, tok.deprel);
      out += '\t';
      write_column(out, tok.deps);
      out += '\t';
      write_column(out, tok.misc);
      out += '\n';
    }
    while (next_range < sent.ranges.size()) {
      const MultiwordRange& r = sent.ranges[next_range++];
      out += std::to_string(r.start) + "-" + std::to_string(r.end) + "\t";
      write_column(out, r.form);
      out += "\t_\t_\t_\t_\t_\t_\t_\t";
      write_column(out, r.misc);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

const std::vector<Token>& syntactic_words(const Sentence& s) {
  return s.tokens;
}

}  // namespace lvc
