#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lvc {

// One syntactic word (integer-id token line). Underscore placeholders are
// normalized to empty strings for every column except FORM, where "_" can
// be a real token. XPOS, DEPS and MISC are carried opaquely for
// round-tripping and never enter feature extraction.
struct Token {
  int id = 0;  // 1-based within the sentence
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::vector<std::string> feats;  // "Key=Value" entries, empty when "_"
  int head = 0;                    // 0 = root
  std::string deprel;
  std::string deps;
  std::string misc;

  bool operator==(const Token&) const = default;
};

// "n-m" surface range line. Carries no annotation of its own and is
// excluded from all feature counts.
struct MultiwordRange {
  int start = 0;
  int end = 0;
  std::string form;
  std::string misc;

  bool operator==(const MultiwordRange&) const = default;
};

struct Sentence {
  std::string sent_id;
  std::string text;
  std::vector<std::string> comments;  // verbatim lines, '#' included
  std::vector<Token> tokens;
  std::vector<MultiwordRange> ranges;
  bool root_anomalous = false;  // number of head==0 tokens differs from 1

  // root_anomalous is derived from tokens and excluded from equality.
  bool operator==(const Sentence& o) const {
    return sent_id == o.sent_id && text == o.text && comments == o.comments &&
           tokens == o.tokens && ranges == o.ranges;
  }
};

struct Treebank {
  std::string name;
  std::vector<Sentence> sentences;

  bool operator==(const Treebank&) const = default;
};

struct ParseOptions {
  bool strict = false;
  std::string name;  // treebank name recorded on the result
};

struct ParseStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t empty_nodes_skipped = 0;      // "n.m" lines, counted and dropped
  std::size_t malformed_lines_skipped = 0;  // lenient mode only
  std::size_t sentences_dropped = 0;        // lenient mode: unusable tree
  std::size_t root_anomalies = 0;           // kept but flagged in lenient mode
  std::size_t duplicate_sent_ids = 0;
};

struct ParseResult {
  Treebank treebank;
  ParseStats stats;
  std::vector<std::string> warnings;
};

// Parses a CoNLL-U document (UTF-8, LF or CRLF). Strict mode throws
// ParseError on the first malformation; lenient mode skips malformed lines,
// drops sentences whose tree structure cannot be repaired, keeps
// root-count anomalies flagged, and records everything in stats/warnings.
ParseResult parse_conllu(std::string_view text, const ParseOptions& opts = {});
ParseResult parse_conllu_file(const std::string& path,
                              const ParseOptions& opts = {});

// Canonical serialization: comments verbatim, range lines ahead of their
// start token, "_" for empty fields, LF endings, one blank line after each
// sentence. parse(serialize(tb)) is structurally equal to tb.
std::string serialize_conllu(const Treebank& tb);

// The tokens counted by every feature: integer-id words only; ranges and
// empty nodes are already excluded at parse time.
const std::vector<Token>& syntactic_words(const Sentence& s);

}  // namespace lvc
