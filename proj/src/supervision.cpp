#include "lvckit/supervision.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "lvckit/errors.hpp"
#include "lvckit/log.hpp"

namespace lvc {

namespace {

// Tabs and newlines would break the TSV row.
std::string sanitize_cell(std::string s) {
  for (char& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s;
}

std::string sentence_snippet(const Sentence& s) {
  if (!s.text.empty()) return s.text;
  std::string joined;
  for (const Token& tok : s.tokens) {
    if (!joined.empty()) joined += ' ';
    joined += tok.form;
  }
  return joined;
}

LvcCandidate make_candidate(const Sentence& s, const std::string& treebank,
                            const Token& dep, const Token& head,
                            LvcRelation relation) {
  LvcCandidate c;
  c.treebank = treebank;
  c.sent_id = s.sent_id;
  c.dep_id = dep.id;
  c.head_id = head.id;
  c.dep_lemma = dep.lemma.empty() ? dep.form : dep.lemma;
  c.head_lemma = head.lemma.empty() ? head.form : head.lemma;
  c.relation = relation;
  c.snippet = sentence_snippet(s);
  return c;
}

std::vector<std::string> split_tabs_keep_empty(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string lower_ascii(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  return s;
}

std::string trim_spaces(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \r");
  return s.substr(b, e - b + 1);
}

int parse_id_cell(const std::string& cell, std::size_t row,
                  const char* column) {
  try {
    std::size_t used = 0;
    int v = std::stoi(cell, &used);
    if (used != cell.size() || v < 1) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw DataError("review sheet row " + std::to_string(row) +
                    ": bad " + std::string(column) + " '" + cell + "'");
  }
}

}  // namespace

std::string_view relation_name(LvcRelation r) {
  return r == LvcRelation::ExplicitLvc ? "explicit_lvc" : "nv_compound";
}

std::string_view rule_name(ExtractionRule r) {
  return r == ExtractionRule::ExplicitLvc ? "explicit_lvc" : "nv_compound";
}

std::string CandidateKey::to_string() const {
  return treebank + "/" + sent_id + "/" + std::to_string(dep_id) + "-" +
         std::to_string(head_id);
}

DatasetStats DatasetStats::from_counts(std::size_t total,
                                       std::size_t candidates,
                                       std::size_t removed) {
  if (removed > candidates || candidates > total)
    throw DataError("inconsistent dataset counts");
  DatasetStats st;
  st.total_sentences = total;
  st.candidate_sentences = candidates;
  st.removed_sentences = removed;
  st.retained_sentences = total - removed;
  st.positive_sentences = candidates - removed;
  return st;
}

bool DatasetStats::identities_hold() const {
  return retained_sentences == total_sentences - removed_sentences &&
         positive_sentences == candidate_sentences - removed_sentences;
}

std::vector<LvcCandidate> extract_explicit_lvc(
    const Sentence& s, const std::string& treebank,
    std::size_t* skipped_root_attached) {
  std::vector<LvcCandidate> out;
  for (const Token& tok : syntactic_words(s)) {
    if (tok.deprel != "compound:lvc") continue;
    if (tok.head == 0) {
      if (skipped_root_attached) ++(*skipped_root_attached);
      log_warn("compound:lvc arc on the root skipped (" + treebank + "/" +
               s.sent_id + " token " + std::to_string(tok.id) + ")");
      continue;
    }
    if (tok.head < 0 || static_cast<std::size_t>(tok.head) > s.tokens.size())
      continue;
    const Token& head = s.tokens[static_cast<std::size_t>(tok.head) - 1];
    out.push_back(make_candidate(s, treebank, tok, head,
                                 LvcRelation::ExplicitLvc));
  }
  return out;
}

std::vector<LvcCandidate> extract_nv_compound(const Sentence& s,
                                              const std::string& treebank) {
  std::vector<LvcCandidate> out;
  for (const Token& tok : syntactic_words(s)) {
    if (tok.deprel != "compound" || tok.upos != "NOUN" || tok.head <= 0 ||
        static_cast<std::size_t>(tok.head) > s.tokens.size())
      continue;
    const Token& head = s.tokens[static_cast<std::size_t>(tok.head) - 1];
    if (head.upos != "VERB") continue;
    out.push_back(make_candidate(s, treebank, tok, head,
                                 LvcRelation::NvCompound));
  }
  return out;
}

ExtractionResult extract_candidates(const Treebank& tb) {
  ExtractionResult result;
  bool has_explicit = false;
  for (const Sentence& s : tb.sentences) {
    for (const Token& tok : s.tokens) {
      if (tok.deprel == "compound:lvc") {
        has_explicit = true;
        break;
      }
    }
    if (has_explicit) break;
  }
  result.rule =
      has_explicit ? ExtractionRule::ExplicitLvc : ExtractionRule::NvCompound;
  for (const Sentence& s : tb.sentences) {
    std::vector<LvcCandidate> cands =
        has_explicit
            ? extract_explicit_lvc(s, tb.name, &result.skipped_root_attached)
            : extract_nv_compound(s, tb.name);
    result.candidates.insert(result.candidates.end(),
                             std::make_move_iterator(cands.begin()),
                             std::make_move_iterator(cands.end()));
  }
  return result;
}

std::string render_review_sheet(std::vector<LvcCandidate> cands,
                                const std::string& header_comment,
                                std::size_t* duplicates_dropped) {
  if (cands.empty()) throw DataError("no candidates to export");
  std::sort(cands.begin(), cands.end(),
            [](const LvcCandidate& a, const LvcCandidate& b) {
              return a.key() < b.key();
            });
  std::string out;
  if (!header_comment.empty()) out += "# " + header_comment + "\n";
  out +=
      "treebank\tsent_id\tdep_id\thead_id\tdep_lemma\thead_lemma\tsnippet\t"
      "verdict\n";
  std::size_t dups = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (i > 0 && cands[i].key() == cands[i - 1].key()) {
      ++dups;
      log_warn("duplicate candidate key dropped: " + cands[i].key().to_string());
      continue;
    }
    const LvcCandidate& c = cands[i];
    out += sanitize_cell(c.treebank) + "\t" + sanitize_cell(c.sent_id) + "\t" +
           std::to_string(c.dep_id) + "\t" + std::to_string(c.head_id) + "\t" +
           sanitize_cell(c.dep_lemma) + "\t" + sanitize_cell(c.head_lemma) +
           "\t" + sanitize_cell(c.snippet) + "\t\n";
  }
  if (duplicates_dropped) *duplicates_dropped = dups;
  return out;
}

void write_review_sheet(const std::vector<LvcCandidate>& cands,
                        const std::string& path,
                        const std::string& header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write review sheet: " + path);
  out << render_review_sheet(cands, header_comment);
  if (!out) throw DataError("I/O failure writing review sheet: " + path);
}

std::vector<ReviewDecision> parse_review_sheet(std::string_view text) {
  std::vector<ReviewDecision> decisions;
  std::size_t row = 0;
  bool header_seen = false;
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
    if (!header_seen) {
      if (line.substr(0, 8) != "treebank")
        throw DataError("review sheet: missing header row");
      header_seen = true;
      continue;
    }
    auto cols = split_tabs_keep_empty(line);
    if (cols.size() < 8)
      throw DataError("review sheet row " + std::to_string(row) +
                      ": expected 8 columns, got " + std::to_string(cols.size()));
    const std::string verdict = lower_ascii(trim_spaces(cols[7]));
    if (verdict.empty()) continue;  // no decision; keep by default
    ReviewDecision d;
    d.key.treebank = cols[0];
    d.key.sent_id = cols[1];
    d.key.dep_id = parse_id_cell(cols[2], row, "dep_id");
    d.key.head_id = parse_id_cell(cols[3], row, "head_id");
    if (verdict == "keep")
      d.verdict = Verdict::Keep;
    else if (verdict == "remove")
      d.verdict = Verdict::Remove;
    else
      throw DataError("review sheet row " + std::to_string(row) +
                      ": bad verdict '" + cols[7] + "' (keep|remove)");
    if (cols.size() > 8) d.annotator = trim_spaces(cols[8]);
    decisions.push_back(std::move(d));
  }
  if (!header_seen) throw DataError("review sheet: missing header row");
  return decisions;
}

std::vector<ReviewDecision> read_review_sheet(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open review sheet: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_review_sheet(buf.str());
}

ReviewOutcome apply_review(const std::vector<LvcCandidate>& cands,
                           const std::vector<ReviewDecision>& decisions) {
  std::map<CandidateKey, const LvcCandidate*> by_key;
  for (const LvcCandidate& c : cands) by_key.emplace(c.key(), &c);

  std::vector<std::string> unknown;
  std::map<CandidateKey, Verdict> verdicts;
  for (const ReviewDecision& d : decisions) {
    if (!by_key.count(d.key)) {
      unknown.push_back(d.key.to_string());
      continue;
    }
    verdicts[d.key] = d.verdict;  // later decisions win
  }
  if (!unknown.empty()) {
    std::string msg = "review decisions reference unknown candidates:";
    for (const std::string& k : unknown) msg += " " + k;
    throw DataError(msg);
  }

  ReviewOutcome outcome;
  std::map<SentenceKey, std::pair<std::size_t, std::size_t>> per_sentence;
  for (const auto& [key, cand] : by_key) {
    const bool keep =
        !verdicts.count(key) || verdicts.at(key) == Verdict::Keep;
    auto& [kept_n, total_n] = per_sentence[{key.treebank, key.sent_id}];
    ++total_n;
    if (keep) {
      ++kept_n;
      outcome.kept.push_back(*cand);
    }
  }
  for (const auto& [skey, counts] : per_sentence)
    if (counts.first == 0) outcome.removed_sentences.insert(skey);
  return outcome;
}

AssembledDataset assemble_dataset(const std::vector<Treebank>& treebanks,
                                  const std::vector<LvcCandidate>& kept,
                                  const std::set<SentenceKey>& removed) {
  std::map<SentenceKey, std::vector<CandidateKey>> kept_by_sentence;
  for (const LvcCandidate& c : kept)
    kept_by_sentence[{c.treebank, c.sent_id}].push_back(c.key());

  AssembledDataset out;
  std::size_t total = 0;
  std::size_t removed_matched = 0;
  std::size_t positives = 0;
  for (const Treebank& tb : treebanks) {
    for (const Sentence& s : tb.sentences) {
      ++total;
      const SentenceKey skey{tb.name, s.sent_id};
      if (removed.count(skey)) {
        ++removed_matched;
        continue;
      }
      LabeledSentence ls;
      ls.treebank = tb.name;
      ls.sent_id = s.sent_id;
      ls.surface_text = sentence_snippet(s);
      ls.lemmas.reserve(s.tokens.size());
      for (const Token& tok : syntactic_words(s))
        ls.lemmas.push_back(tok.lemma.empty() ? tok.form : tok.lemma);
      if (auto it = kept_by_sentence.find(skey); it != kept_by_sentence.end()) {
        ls.candidates = it->second;
        ls.label = 1;
        ++positives;
      }
      out.sentences.push_back(std::move(ls));
    }
  }
  if (removed_matched != removed.size())
    log_warn(std::to_string(removed.size() - removed_matched) +
             " removed sentence keys did not match any input sentence");
  out.stats = DatasetStats::from_counts(total, positives + removed_matched,
                                        removed_matched);
  return out;
}

}  // namespace lvc
