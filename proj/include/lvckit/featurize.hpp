#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lvckit/conllu.hpp"
#include "lvckit/supervision.hpp"
#include "lvckit/textnorm.hpp"

namespace lvc {

// Entries sorted by index, values finite and non-zero.
struct SparseVector {
  std::size_t dimension = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;

  double l2_norm() const;
  void l2_normalize();  // no-op on the zero vector
  double dot_dense(const std::vector<double>& w) const;
};

// Lemma sequence in token order, lowercased per the casing policy. Missing
// lemmas fall back to the (lowercased) surface form; fallbacks are counted
// and logged.
std::vector<std::string> lemma_text(const Sentence& s, Casing casing,
                                    std::size_t* lemma_fallbacks = nullptr);
// The stored lemma sequence already carries the surface-form fallback, so
// only the casing policy applies here.
std::vector<std::string> lemma_text(const LabeledSentence& s, Casing casing);

// Frozen lemma n-gram vocabulary. Terms are kept in lexicographic order;
// selection at fit time is by document frequency, ties broken
// lexicographically ascending.
struct TfidfVocabulary {
  std::vector<std::string> terms;
  std::vector<std::size_t> doc_freq;  // aligned with terms
  std::size_t corpus_size = 0;
  std::size_t max_features = 5000;
  int ngram_max = 2;
  Casing casing = Casing::Standard;  // recorded policy; documents arrive cased
  std::map<std::string, std::uint32_t, std::less<>> index;

  // ln((1+N) / (1+df)) + 1
  double idf(std::uint32_t term_index) const;
  void rebuild_index();
  std::uint64_t fingerprint() const;
};

// All unigrams plus adjacent bigrams (tokens joined by one space) when
// ngram_max is 2.
TfidfVocabulary fit_tfidf(const std::vector<std::vector<std::string>>& corpus,
                          std::size_t max_features = 5000, int ngram_max = 2,
                          Casing casing = Casing::Standard);

// tf * idf per in-vocabulary term, L2-normalized. Out-of-vocabulary terms
// are ignored; an all-OOV document maps to the zero vector.
SparseVector tfidf_transform(const std::vector<std::string>& doc,
                             const TfidfVocabulary& vocab);

enum class GrammarChannel { Upos = 0, Deprel = 1, Morph = 2 };

std::string_view channel_name(GrammarChannel c);

struct GrammarFeature {
  GrammarChannel channel = GrammarChannel::Upos;
  std::string value;

  auto operator<=>(const GrammarFeature&) const = default;
};

// Fixed morphosyntactic feature inventory, built from training sentences
// only; evaluation never extends it.
struct GrammarInventory {
  std::vector<GrammarFeature> features;  // (channel, value) ascending
  std::map<GrammarFeature, std::uint32_t> index;

  void rebuild_index();
  std::uint64_t fingerprint() const;
};

struct CoverageTally {
  std::size_t matched = 0;    // occurrences found in the inventory
  std::size_t unmatched = 0;  // occurrences ignored at evaluation time
};

// Distinct UPOS tags, full DEPREL labels (subtypes intact: "compound:lvc"
// stays distinct from "compound") and FEATS "Key=Value" pairs.
GrammarInventory fit_grammar_inventory(
    const std::vector<const Sentence*>& train);
GrammarInventory fit_grammar_inventory(const std::vector<Sentence>& train);

// Sentence-level occurrence counts over the inventory.
SparseVector grammar_vector(const Sentence& s, const GrammarInventory& inv,
                            CoverageTally* coverage = nullptr);

}  // namespace lvc
