#include "lvckit/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "lvckit/errors.hpp"
#include "lvckit/hash.hpp"
#include "lvckit/log.hpp"

namespace lvc {

namespace {

void for_each_ngram(const std::vector<std::string>& doc, int ngram_max,
                    const std::function<void(const std::string&)>& fn) {
  for (std::size_t i = 0; i < doc.size(); ++i) {
    fn(doc[i]);
    if (ngram_max >= 2 && i + 1 < doc.size()) fn(doc[i] + " " + doc[i + 1]);
  }
}

void for_each_grammar_occurrence(
    const Sentence& s, const std::function<void(const GrammarFeature&)>& fn) {
  for (const Token& tok : syntactic_words(s)) {
    if (!tok.upos.empty() && tok.upos != "_")
      fn({GrammarChannel::Upos, tok.upos});
    if (!tok.deprel.empty() && tok.deprel != "_")
      fn({GrammarChannel::Deprel, tok.deprel});
    for (const std::string& feat : tok.feats) fn({GrammarChannel::Morph, feat});
  }
}

}  // namespace

double SparseVector::l2_norm() const {
  double sq = 0.0;
  for (const auto& [idx, value] : entries) sq += value * value;
  return std::sqrt(sq);
}

void SparseVector::l2_normalize() {
  const double norm = l2_norm();
  if (norm == 0.0) return;
  for (auto& [idx, value] : entries) value /= norm;
}

double SparseVector::dot_dense(const std::vector<double>& w) const {
  double acc = 0.0;
  for (const auto& [idx, value] : entries) acc += w[idx] * value;
  return acc;
}

std::vector<std::string> lemma_text(const Sentence& s, Casing casing,
                                    std::size_t* lemma_fallbacks) {
  std::vector<std::string> out;
  out.reserve(s.tokens.size());
  std::size_t fallbacks = 0;
  for (const Token& tok : syntactic_words(s)) {
    if (tok.lemma.empty()) {
      ++fallbacks;
      out.push_back(to_lower(tok.form, casing));
    } else {
      out.push_back(to_lower(tok.lemma, casing));
    }
  }
  if (fallbacks > 0)
    log_info("sentence " + s.sent_id + ": " + std::to_string(fallbacks) +
             " missing lemmas replaced by surface forms");
  if (lemma_fallbacks) *lemma_fallbacks += fallbacks;
  return out;
}

std::vector<std::string> lemma_text(const LabeledSentence& s, Casing casing) {
  std::vector<std::string> out;
  out.reserve(s.lemmas.size());
  for (const std::string& lemma : s.lemmas) out.push_back(to_lower(lemma, casing));
  return out;
}

double TfidfVocabulary::idf(std::uint32_t term_index) const {
  const double n = static_cast<double>(corpus_size);
  const double df = static_cast<double>(doc_freq[term_index]);
  return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

void TfidfVocabulary::rebuild_index() {
  index.clear();
  for (std::uint32_t i = 0; i < terms.size(); ++i) index.emplace(terms[i], i);
}

std::uint64_t TfidfVocabulary::fingerprint() const {
  std::uint64_t h = fnv1a64("tfidf");
  h = fnv1a64(casing_name(casing), h);
  h = fnv1a64("|" + std::to_string(ngram_max) + "|" +
                  std::to_string(max_features) + "|" +
                  std::to_string(corpus_size),
              h);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    h = fnv1a64(terms[i], h);
    h = fnv1a64("\x1f" + std::to_string(doc_freq[i]) + "\x1e", h);
  }
  return h;
}

TfidfVocabulary fit_tfidf(const std::vector<std::vector<std::string>>& corpus,
                          std::size_t max_features, int ngram_max,
                          Casing casing) {
  if (corpus.empty()) throw DataError("cannot fit TF-IDF on an empty corpus");
  if (max_features == 0) throw ConfigError("max_features must be positive");
  if (ngram_max < 1 || ngram_max > 2)
    throw ConfigError("ngram_max must be 1 or 2");

  std::map<std::string, std::size_t> df;
  std::size_t total_tokens = 0;
  std::set<std::string> seen;
  for (const auto& doc : corpus) {
    total_tokens += doc.size();
    seen.clear();
    for_each_ngram(doc, ngram_max, [&](const std::string& term) {
      if (seen.insert(term).second) ++df[term];
    });
  }
  if (total_tokens == 0)
    throw DataError("cannot fit TF-IDF: corpus has zero tokens");

  // Top max_features by document frequency, ties lexicographic ascending.
  std::vector<const std::pair<const std::string, std::size_t>*> ranked;
  ranked.reserve(df.size());
  for (const auto& entry : df) ranked.push_back(&entry);
  if (ranked.size() > max_features) {
    std::nth_element(ranked.begin(),
                     ranked.begin() + static_cast<std::ptrdiff_t>(max_features),
                     ranked.end(), [](const auto* a, const auto* b) {
                       if (a->second != b->second) return a->second > b->second;
                       return a->first < b->first;
                     });
    ranked.resize(max_features);
  }

  TfidfVocabulary vocab;
  vocab.corpus_size = corpus.size();
  vocab.max_features = max_features;
  vocab.ngram_max = ngram_max;
  vocab.casing = casing;
  std::sort(ranked.begin(), ranked.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  vocab.terms.reserve(ranked.size());
  vocab.doc_freq.reserve(ranked.size());
  for (const auto* entry : ranked) {
    vocab.terms.push_back(entry->first);
    vocab.doc_freq.push_back(entry->second);
  }
  vocab.rebuild_index();
  return vocab;
}

SparseVector tfidf_transform(const std::vector<std::string>& doc,
                             const TfidfVocabulary& vocab) {
  std::map<std::uint32_t, double> counts;
  for_each_ngram(doc, vocab.ngram_max, [&](const std::string& term) {
    auto it = vocab.index.find(term);
    if (it != vocab.index.end()) counts[it->second] += 1.0;
  });
  SparseVector vec;
  vec.dimension = vocab.terms.size();
  vec.entries.reserve(counts.size());
  for (const auto& [idx, tf] : counts)
    vec.entries.emplace_back(idx, tf * vocab.idf(idx));
  vec.l2_normalize();
  return vec;
}

std::string_view channel_name(GrammarChannel c) {
  switch (c) {
    case GrammarChannel::Upos: return "UPOS";
    case GrammarChannel::Deprel: return "DEPREL";
    case GrammarChannel::Morph: return "MORPH";
  }
  return "UPOS";
}

void GrammarInventory::rebuild_index() {
  index.clear();
  for (std::uint32_t i = 0; i < features.size(); ++i)
    index.emplace(features[i], i);
}

std::uint64_t GrammarInventory::fingerprint() const {
  std::uint64_t h = fnv1a64("grammar");
  for (const GrammarFeature& f : features) {
    h = fnv1a64(channel_name(f.channel), h);
    h = fnv1a64("\x1f" + f.value + "\x1e", h);
  }
  return h;
}

GrammarInventory fit_grammar_inventory(
    const std::vector<const Sentence*>& train) {
  if (train.empty())
    throw DataError("cannot fit grammar inventory on an empty collection");
  std::set<GrammarFeature> distinct;
  for (const Sentence* s : train)
    for_each_grammar_occurrence(
        *s, [&](const GrammarFeature& f) { distinct.insert(f); });
  GrammarInventory inv;
  inv.features.assign(distinct.begin(), distinct.end());
  inv.rebuild_index();
  return inv;
}

GrammarInventory fit_grammar_inventory(const std::vector<Sentence>& train) {
  std::vector<const Sentence*> ptrs;
  ptrs.reserve(train.size());
  for (const Sentence& s : train) ptrs.push_back(&s);
  return fit_grammar_inventory(ptrs);
}

SparseVector grammar_vector(const Sentence& s, const GrammarInventory& inv,
                            CoverageTally* coverage) {
  std::map<std::uint32_t, double> counts;
  for_each_grammar_occurrence(s, [&](const GrammarFeature& f) {
    auto it = inv.index.find(f);
    if (it == inv.index.end()) {
      if (coverage) ++coverage->unmatched;
      return;
    }
    if (coverage) ++coverage->matched;
    counts[it->second] += 1.0;
  });
  SparseVector vec;
  vec.dimension = inv.features.size();
  vec.entries.reserve(counts.size());
  for (const auto& [idx, count] : counts) vec.entries.emplace_back(idx, count);
  return vec;
}

}  // namespace lvc
