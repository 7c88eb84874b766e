#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "lvckit/conllu.hpp"

namespace lvc {

enum class LvcRelation { ExplicitLvc, NvCompound };

std::string_view relation_name(LvcRelation r);

// Stable across re-extraction; the unit reviewers accept or reject.
struct CandidateKey {
  std::string treebank;
  std::string sent_id;
  int dep_id = 0;
  int head_id = 0;

  auto operator<=>(const CandidateKey&) const = default;
  std::string to_string() const;
};

struct SentenceKey {
  std::string treebank;
  std::string sent_id;

  auto operator<=>(const SentenceKey&) const = default;
};

struct LvcCandidate {
  std::string treebank;
  std::string sent_id;
  int dep_id = 0;   // nominal dependent
  int head_id = 0;  // verbal head
  std::string dep_lemma;
  std::string head_lemma;
  LvcRelation relation = LvcRelation::ExplicitLvc;
  std::string snippet;  // surface text for reviewer context

  CandidateKey key() const { return {treebank, sent_id, dep_id, head_id}; }
};

enum class Verdict { Keep, Remove };

struct ReviewDecision {
  CandidateKey key;
  Verdict verdict = Verdict::Keep;
  std::string annotator;
};

struct LabeledSentence {
  std::string treebank;
  std::string sent_id;
  std::string surface_text;
  // Raw-cased lemma sequence; missing lemmas already replaced by the
  // surface form at assembly time.
  std::vector<std::string> lemmas;
  int label = 0;  // 1 iff candidates is non-empty
  std::vector<CandidateKey> candidates;
};

struct DatasetStats {
  std::size_t total_sentences = 0;
  std::size_t candidate_sentences = 0;
  std::size_t removed_sentences = 0;
  std::size_t retained_sentences = 0;
  std::size_t positive_sentences = 0;

  // retained = total - removed; positives = candidates - removed.
  static DatasetStats from_counts(std::size_t total, std::size_t candidates,
                                  std::size_t removed);
  bool identities_hold() const;
};

// One candidate per compound:lvc arc (exact, case-sensitive). Arcs hanging
// off the root have no head token; they are skipped and counted.
std::vector<LvcCandidate> extract_explicit_lvc(
    const Sentence& s, const std::string& treebank,
    std::size_t* skipped_root_attached = nullptr);

// Fallback rule: bare "compound" arcs with a NOUN dependent and a VERB
// governor. PROPN does not qualify.
std::vector<LvcCandidate> extract_nv_compound(const Sentence& s,
                                              const std::string& treebank);

enum class ExtractionRule { ExplicitLvc, NvCompound };

std::string_view rule_name(ExtractionRule r);

struct ExtractionResult {
  ExtractionRule rule = ExtractionRule::ExplicitLvc;
  std::vector<LvcCandidate> candidates;
  std::size_t skipped_root_attached = 0;
};

// A treebank with any compound:lvc arc uses only the explicit rule;
// otherwise the noun-verb compound fallback applies.
ExtractionResult extract_candidates(const Treebank& tb);

// Review sheet TSV. Columns: treebank, sent_id, dep_id, head_id, dep_lemma,
// head_lemma, snippet, verdict (empty on export; an optional trailing
// "annotator" column is accepted on import). Rows are sorted by candidate
// key; duplicate keys are dropped with a warning. header_comment, when
// non-empty, is emitted as a leading "# ..." line.
std::string render_review_sheet(std::vector<LvcCandidate> cands,
                                const std::string& header_comment = {},
                                std::size_t* duplicates_dropped = nullptr);
void write_review_sheet(const std::vector<LvcCandidate>& cands,
                        const std::string& path,
                        const std::string& header_comment = {});

// Rows whose verdict cell is empty carry no decision and are omitted.
std::vector<ReviewDecision> parse_review_sheet(std::string_view text);
std::vector<ReviewDecision> read_review_sheet(const std::string& path);

struct ReviewOutcome {
  std::vector<LvcCandidate> kept;
  // Sentences all of whose candidates were removed; they leave the dataset
  // entirely instead of turning negative.
  std::set<SentenceKey> removed_sentences;
};

// Candidates without a decision default to keep. Decisions referencing
// unknown candidates raise DataError listing the offending keys.
ReviewOutcome apply_review(const std::vector<LvcCandidate>& cands,
                           const std::vector<ReviewDecision>& decisions);

struct AssembledDataset {
  std::vector<LabeledSentence> sentences;
  DatasetStats stats;
};

AssembledDataset assemble_dataset(const std::vector<Treebank>& treebanks,
                                  const std::vector<LvcCandidate>& kept,
                                  const std::set<SentenceKey>& removed);

}  // namespace lvc
