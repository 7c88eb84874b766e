// Acceptance suite: one criterion per entry, one PASS/FAIL line each.
// Exits nonzero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "json.hpp"
#include "lvckit/commands.hpp"
#include "lvckit/config.hpp"
#include "lvckit/conllu.hpp"
#include "lvckit/eval.hpp"
#include "lvckit/featurize.hpp"
#include "lvckit/logreg.hpp"
#include "lvckit/persist.hpp"
#include "lvckit/prng.hpp"
#include "lvckit/supervision.hpp"

using namespace lvc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

void require_close(double got, double want, double tol, const std::string& what) {
  if (std::abs(got - want) > tol)
    throw Failure(what + ": got " + std::to_string(got) + ", want " +
                  std::to_string(want));
}

double elapsed_s(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<DiagnosticItem> make_items(std::size_t per_condition) {
  std::vector<DiagnosticItem> items;
  const Condition conds[3] = {Condition::Random, Condition::Nlvc,
                              Condition::Lvc};
  const char prefix[3] = {'R', 'N', 'L'};
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 1; i <= per_condition; ++i) {
      DiagnosticItem item;
      item.item_id = prefix[c] + std::to_string(i);
      item.surface_text = "item";
      item.condition = conds[c];
      items.push_back(item);
    }
  }
  return items;
}

std::map<std::string, int> make_predictions(
    const std::vector<DiagnosticItem>& items, std::size_t correct_random,
    std::size_t correct_nlvc, std::size_t correct_lvc) {
  std::map<std::string, int> preds;
  std::size_t seen[3] = {0, 0, 0};
  const std::size_t want[3] = {correct_random, correct_nlvc, correct_lvc};
  for (const DiagnosticItem& item : items) {
    const int c = static_cast<int>(item.condition);
    const bool correct = seen[c]++ < want[c];
    preds[item.item_id] = correct ? item.gold() : 1 - item.gold();
  }
  return preds;
}

void check_row(const SplitReport& r, const char* random, const char* nlvc,
               const char* lvc, const char* overall, std::size_t fp,
               std::size_t fn, const char* prec, const char* rec) {
  require(format_pct_1dp(r.random_pct()) == random,
          "Random " + format_pct_1dp(r.random_pct()) + " != " + random);
  require(format_pct_1dp(r.nlvc_pct()) == nlvc,
          "NLVC " + format_pct_1dp(r.nlvc_pct()) + " != " + nlvc);
  require(format_pct_1dp(r.lvc_pct()) == lvc,
          "LVC " + format_pct_1dp(r.lvc_pct()) + " != " + lvc);
  require(format_pct_1dp(r.overall_pct()) == overall,
          "Overall " + format_pct_1dp(r.overall_pct()) + " != " + overall);
  require(r.fp() == fp, "FP " + std::to_string(r.fp()) + " != " +
                            std::to_string(fp));
  require(r.fn() == fn, "FN " + std::to_string(r.fn()) + " != " +
                            std::to_string(fn));
  require(format_pct_1dp(r.precision_pct()) == prec,
          "Prec " + format_pct_1dp(r.precision_pct()) + " != " + prec);
  require(format_pct_1dp(r.recall_pct()) == rec,
          "Rec " + format_pct_1dp(r.recall_pct()) + " != " + rec);
}

// ---- criteria ----

void report_arithmetic_run1() {
  const auto start = Clock::now();
  auto items = make_items(49);
  SplitReport r = evaluate_split(make_predictions(items, 48, 37, 24), items,
                                 "Lemma-only LR", "Run 1");
  check_row(r, "98.0", "75.5", "49.0", "74.1", 13, 25, "64.9", "49.0");
  require(elapsed_s(start) < 1.0, "runtime exceeded 1 s");
}

void report_arithmetic_grammar() {
  const auto start = Clock::now();
  auto items = make_items(49);
  SplitReport r = evaluate_split(make_predictions(items, 49, 45, 5), items,
                                 "Grammar-only LR");
  check_row(r, "100.0", "91.8", "10.2", "67.3", 4, 44, "55.6", "10.2");
  require(elapsed_s(start) < 1.0, "runtime exceeded 1 s");
}

void recall_identity_and_monotonicity() {
  SplitMix64 rng(404);
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t n = 1 + rng.next() % 25;
    auto items = make_items(n);
    SplitReport r = evaluate_split(
        make_predictions(items, rng.next() % (n + 1), rng.next() % (n + 1),
                         rng.next() % (n + 1)),
        items, "rand");
    require(r.recall_pct() == r.lvc_pct(),
            "recall must equal the LVC success rate exactly");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t n = 1 + rng.next() % 20;
    std::vector<double> scores(n);
    std::vector<int> gold(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = (rng.next() % 41) / 40.0;
      gold[i] = static_cast<int>(rng.next() % 2);
    }
    auto points = pr_sweep(scores, gold);
    for (std::size_t i = 1; i < points.size(); ++i) {
      require(points[i].fp <= points[i - 1].fp, "FP rose with tau");
      require(points[i].fn >= points[i - 1].fn, "FN fell with tau");
    }
  }
}

void dataset_accounting() {
  SplitMix64 rng(505);
  for (int iter = 0; iter < 100; ++iter) {
    const int total = 5 + static_cast<int>(rng.next() % 60);
    const int cand = static_cast<int>(rng.next() % (total + 1));
    Treebank tb;
    tb.name = "m";
    for (int i = 0; i < total; ++i)
      tb.sentences.push_back(fixtures::make_lvc_sentence(
          "m-" + std::to_string(i + 1), i < cand ? 1 + (i % 2) : 0));
    ExtractionResult ex = extract_candidates(tb);
    std::vector<ReviewDecision> decisions;
    for (const LvcCandidate& c : ex.candidates)
      if (rng.next() % 3 == 0)
        decisions.push_back({c.key(), Verdict::Remove, "r"});
    ReviewOutcome out = apply_review(ex.candidates, decisions);
    AssembledDataset ds =
        assemble_dataset({tb}, out.kept, out.removed_sentences);
    require(ds.stats.retained_sentences ==
                ds.stats.total_sentences - ds.stats.removed_sentences,
            "retained != total - removed");
    require(ds.stats.positive_sentences ==
                ds.stats.candidate_sentences - ds.stats.removed_sentences,
            "positives != candidates - removed");
    require(ds.sentences.size() == ds.stats.retained_sentences,
            "dataset size != retained");
  }
  DatasetStats corpus_scale = DatasetStats::from_counts(82884, 10056, 565);
  require(corpus_scale.retained_sentences == 82319, "retained != 82319");
  require(corpus_scale.positive_sentences == 9491, "positives != 9491");
}

void gradient_finite_differences() {
  const auto start = Clock::now();
  SplitMix64 rng(606);
  const double h = 1e-5;
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t dim = 1 + rng.next() % 20;
    const std::size_t m = 1 + rng.next() % 15;
    std::vector<SparseVector> X(m);
    std::vector<int> y(m);
    for (std::size_t i = 0; i < m; ++i) {
      X[i].dimension = dim;
      for (std::size_t j = 0; j < dim; ++j)
        if (rng.next() % 10 < 7)
          X[i].entries.emplace_back(static_cast<std::uint32_t>(j),
                                    4.0 * rng.next_double() - 2.0);
      y[i] = static_cast<int>(rng.next() % 2);
    }
    std::vector<double> w(dim);
    for (double& x : w) x = 2.0 * rng.next_double() - 1.0;
    const double b = 2.0 * rng.next_double() - 1.0;
    const double lambda = rng.next_double();
    const ClassWeights cw{0.5 + 2.0 * rng.next_double(),
                          0.5 + 2.0 * rng.next_double()};

    const LossGrad analytic = loss_and_grad(w, b, lambda, X, y, cw);
    for (std::size_t j = 0; j <= dim; ++j) {
      std::vector<double> wp = w, wm = w;
      double bp = b, bm = b;
      if (j < dim) {
        wp[j] += h;
        wm[j] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double fd = (loss_and_grad(wp, bp, lambda, X, y, cw).loss -
                         loss_and_grad(wm, bm, lambda, X, y, cw).loss) /
                        (2 * h);
      const double got = j < dim ? analytic.grad_weights[j] : analytic.grad_bias;
      const double rel = std::abs(got - fd) / std::max(1.0, std::abs(got));
      require(rel <= 1e-5, "gradient mismatch: rel err " + std::to_string(rel));
    }
  }
  require(elapsed_s(start) < 5.0, "runtime exceeded 5 s");
}

void optimizer_on_separable_data() {
  std::vector<SparseVector> X;
  std::vector<int> y;
  const double pts[][2] = {{2, 1}, {1, 2}, {1.5, 1.5}, {3, 1}};
  for (const auto& p : pts) {
    SparseVector pos;
    pos.dimension = 2;
    pos.entries = {{0, p[0]}, {1, p[1]}};
    X.push_back(pos);
    y.push_back(1);
    SparseVector neg;
    neg.dimension = 2;
    neg.entries = {{0, -p[0]}, {1, -p[1]}};
    X.push_back(neg);
    y.push_back(0);
  }
  std::vector<double> history;
  LogRegModel model =
      train_logreg(X, y, {1e-4, 1000, 1e-6}, {1.0, 1.0}, &history);
  for (std::size_t i = 0; i < X.size(); ++i)
    require(predict_label(model, X[i]) == y[i],
            "training accuracy below 100%");
  for (std::size_t i = 1; i < history.size(); ++i)
    require(history[i] <= history[i - 1], "loss sequence increased");

  LogRegModel again = train_logreg(X, y, {1e-4, 1000, 1e-6}, {1.0, 1.0});
  require(model.weights.size() == again.weights.size(), "size mismatch");
  require(std::memcmp(model.weights.data(), again.weights.data(),
                      model.weights.size() * sizeof(double)) == 0,
          "weights differ between identical runs");
  require(std::memcmp(&model.bias, &again.bias, sizeof(double)) == 0,
          "bias differs between identical runs");
}

void tfidf_oracle() {
  TfidfVocabulary vocab;
  vocab.terms = {"al", "ver"};
  vocab.doc_freq = {2, 1};
  vocab.corpus_size = 2;
  vocab.rebuild_index();
  require_close(vocab.idf(0), 1.0, 1e-9, "idf(al)");
  require_close(vocab.idf(1), std::log(1.5) + 1.0, 1e-9, "idf(ver)");

  SplitMix64 rng(707);
  const char* words[] = {"al", "ver", "git", "gel", "yap", "et"};
  std::vector<std::vector<std::string>> corpus;
  for (int d = 0; d < 40; ++d) {
    std::vector<std::string> doc;
    const int n = 1 + static_cast<int>(rng.next() % 9);
    for (int i = 0; i < n; ++i) doc.push_back(words[rng.next() % 6]);
    corpus.push_back(doc);
  }
  TfidfVocabulary fitted = fit_tfidf(corpus);
  for (const auto& doc : corpus) {
    SparseVector v = tfidf_transform(doc, fitted);
    if (!v.entries.empty())
      require(std::abs(v.l2_norm() - 1.0) <= 1e-9,
              "nonzero vector norm deviates from 1 by more than 1e-9");
  }
}

void threshold_sweep_oracle() {
  SplitMix64 rng(808);
  for (int iter = 0; iter < 500; ++iter) {
    const std::size_t n = 1 + rng.next() % 12;
    std::vector<double> scores(n);
    std::vector<int> gold(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = (rng.next() % 13) / 12.0;
      gold[i] = static_cast<int>(rng.next() % 2);
    }
    for (const ThresholdPoint& pt : pr_sweep(scores, gold)) {
      std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const int pred = scores[i] >= pt.tau ? 1 : 0;
        tp += pred == 1 && gold[i] == 1;
        fp += pred == 1 && gold[i] == 0;
        fn += pred == 0 && gold[i] == 1;
        tn += pred == 0 && gold[i] == 0;
      }
      require(pt.tp == tp && pt.fp == fp && pt.fn == fn && pt.tn == tn,
              "sweep confusion differs from brute force at tau " +
                  std::to_string(pt.tau));
    }
  }
  auto points = pr_sweep({0.9, 0.7, 0.6, 0.2}, {1, 0, 1, 0});
  require(select_tau_max_f1(points) == 0.6,
          "worked example tau* is not 0.6");
}

void conllu_round_trip() {
  ParseResult first = parse_conllu(fixtures::kCorpus, {.strict = true});
  require(first.stats.sentences == fixtures::kCorpusSentences,
          "fixture sentence count");
  require(first.stats.empty_nodes_skipped == fixtures::kCorpusEmptyNodes,
          "fixture empty-node count");
  bool has_range = false;
  bool has_comment = false;
  bool has_empty_feats = false;
  for (const Sentence& s : first.treebank.sentences) {
    has_range |= !s.ranges.empty();
    has_comment |= !s.comments.empty();
    for (const Token& t : s.tokens) has_empty_feats |= t.feats.empty();
  }
  require(has_range && has_comment && has_empty_feats,
          "fixture must cover comments, ranges and empty FEATS");
  const std::string emitted = serialize_conllu(first.treebank);
  ParseResult second = parse_conllu(emitted, {.strict = true});
  require(first.treebank == second.treebank,
          "parse(serialize(parse(d))) differs from parse(d)");
}

void extraction_rules() {
  ParseOptions strict;
  strict.strict = true;
  strict.name = "fx";
  Treebank fx = parse_conllu(fixtures::kCorpus, strict).treebank;
  ExtractionResult ex = extract_candidates(fx);
  require(ex.rule == ExtractionRule::ExplicitLvc, "fixture rule");
  // hand-enumerated: (fx-1, 2<-3), (fx-4, 1<-2), (fx-4, 4<-5)
  require(ex.candidates.size() == 3, "explicit candidate count");
  require(ex.candidates[0].sent_id == "fx-1" && ex.candidates[0].dep_id == 2 &&
              ex.candidates[0].head_id == 3,
          "fx-1 candidate");
  require(ex.candidates[1].sent_id == "fx-4" && ex.candidates[1].dep_id == 1 &&
              ex.candidates[1].head_id == 2,
          "fx-4 first candidate");
  require(ex.candidates[2].sent_id == "fx-4" && ex.candidates[2].dep_id == 4 &&
              ex.candidates[2].head_id == 5,
          "fx-4 second candidate");

  strict.name = "nv";
  Treebank nv = parse_conllu(fixtures::kNvCorpus, strict).treebank;
  ExtractionResult nv_ex = extract_candidates(nv);
  require(nv_ex.rule == ExtractionRule::NvCompound, "nv rule");
  require(nv_ex.candidates.size() == 1, "nv candidate count");
  require(nv_ex.candidates[0].sent_id == "nv-1" &&
              nv_ex.candidates[0].dep_lemma == "kahvalti" &&
              nv_ex.candidates[0].head_lemma == "yap",
          "nv-1 candidate");
  for (const Sentence& s : nv.sentences) {
    if (s.sent_id == "nv-2" || s.sent_id == "nv-3" || s.sent_id == "nv-4")
      require(extract_nv_compound(s, "nv").empty(),
              s.sent_id + " must be excluded");
  }
}

int run_cli(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -2;
}

void end_to_end_smoke() {
  const auto start = Clock::now();
  const char* env = std::getenv("LVCKIT_CLI");
  std::string cli = env ? env : "build/tools/lvckit";
  require(fs::exists(cli), "CLI binary not found (set LVCKIT_CLI)");

  const auto stamp = Clock::now().time_since_epoch().count();
  const fs::path dir =
      fs::temp_directory_path() / ("lvckit_smoke_" + std::to_string(stamp));
  fs::create_directories(dir);

  // 30-sentence mock treebank, 8 candidate sentences
  Treebank tb;
  tb.name = "mock";
  for (int i = 0; i < 30; ++i) {
    Sentence s = fixtures::make_lvc_sentence("mk-" + std::to_string(i + 1),
                                             i < 8 ? 1 : 0, 1 + i % 2);
    if (i >= 8) {
      for (Token& t : s.tokens) {
        if (t.upos == "VERB") {
          t.form = "okudu";
          t.lemma = "oku";
        }
        if (t.upos == "PRON") {
          t.form = "kitap";
          t.lemma = "kitap";
          t.upos = "NOUN";
          t.deprel = "obj";
        }
      }
    }
    tb.sentences.push_back(s);
  }
  std::ofstream(dir / "mock.conllu") << serialize_conllu(tb);

  // 9-item mock diagnostic set with lemma sequences
  std::vector<DiagnosticItem> items;
  const struct {
    const char* id;
    Condition cond;
    std::vector<std::string> lemmas;
  } plan[] = {
      {"R1", Condition::Random, {"hava", "guzel"}},
      {"R2", Condition::Random, {"kitap", "oku"}},
      {"R3", Condition::Random, {"o", "kitap", "oku"}},
      {"N1", Condition::Nlvc, {"kitap", "et", "o"}},
      {"N2", Condition::Nlvc, {"o", "et"}},
      {"N3", Condition::Nlvc, {"et", "kitap"}},
      {"L1", Condition::Lvc, {"is0", "et", "o"}},
      {"L2", Condition::Lvc, {"o", "is0", "et"}},
      {"L3", Condition::Lvc, {"is0", "et"}},
  };
  for (const auto& p : plan) {
    DiagnosticItem item;
    item.item_id = p.id;
    item.surface_text = "mock";
    item.condition = p.cond;
    item.lemma_text = p.lemmas;
    items.push_back(item);
  }
  write_diagnostic_jsonl(items, (dir / "diag.jsonl").string());

  std::ostringstream toml;
  toml << "[data]\n"
       << "treebanks = [\"" << (dir / "mock.conllu").string() << "\"]\n"
       << "review_sheet = \"" << (dir / "review.tsv").string() << "\"\n"
       << "dataset = \"" << (dir / "dataset.jsonl").string() << "\"\n"
       << "[features]\nrepresentation = \"lemma_tfidf\"\nmax_features = 200\n"
       << "[train]\nlambda = 0.01\ntol = 1e-8\nseed = 42\n"
       << "[calibrate]\nmode = \"max_f1\"\n"
       << "[diagnostic]\nitems = \"" << (dir / "diag.jsonl").string()
       << "\"\nper_condition = 3\n"
       << "[output]\ndir = \"" << (dir / "out").string() << "\"\n";
  std::ofstream(dir / "config.toml") << toml.str();

  const std::string base = "\"" + cli + "\" ";
  const std::string cfg = " --config \"" + (dir / "config.toml").string() +
                          "\" > \"" + (dir / "log.txt").string() + "\" 2>&1";
  for (const char* sub : {"extract", "build", "train", "calibrate",
                          "evaluate"}) {
    const int code = run_cli(base + sub + cfg);
    if (code != 0) {
      std::ifstream log(dir / "log.txt");
      std::ostringstream buf;
      buf << log.rdbuf();
      throw Failure(std::string(sub) + " exited with code " +
                    std::to_string(code) + ": " + buf.str());
    }
  }

  // the report must be well formed
  nlohmann::json report =
      read_json_file((dir / "out" / "report.json").string());
  require(report.contains("percent") && report.contains("counts"),
          "report.json missing sections");
  const auto& counts = report["counts"];
  require(counts["n_random"] == 3 && counts["n_nlvc"] == 3 &&
              counts["n_lvc"] == 3,
          "report counts do not match the 9-item set");
  const double overall = report["percent"]["overall"].get<double>();
  require(overall >= 0.0 && overall <= 100.0, "overall out of range");
  require(fs::exists(dir / "out" / "sweep.csv"), "sweep.csv missing");
  require(fs::exists(dir / "out" / "model_calibrated.json"),
          "model_calibrated.json missing");

  std::error_code ec;
  fs::remove_all(dir, ec);
  require(elapsed_s(start) < 10.0, "runtime exceeded 10 s");
}

struct Criterion {
  const char* name;
  std::function<void()> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"split-report-arithmetic-48-37-24", report_arithmetic_run1},
      {"split-report-arithmetic-49-45-5", report_arithmetic_grammar},
      {"recall-lvc-identity-and-error-monotonicity",
       recall_identity_and_monotonicity},
      {"dataset-accounting-identities", dataset_accounting},
      {"gradient-vs-finite-differences", gradient_finite_differences},
      {"optimizer-separable-deterministic", optimizer_on_separable_data},
      {"tfidf-idf-and-unit-norm", tfidf_oracle},
      {"threshold-sweep-oracle-equivalence", threshold_sweep_oracle},
      {"conllu-round-trip", conllu_round_trip},
      {"extraction-rules-hand-enumerated", extraction_rules},
      {"end-to-end-smoke", end_to_end_smoke},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = Clock::now();
    try {
      c.fn();
      std::printf("[PASS] %-45s (%.2fs)\n", c.name, elapsed_s(start));
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] %-45s %s\n", c.name, e.what());
    }
  }
  if (failures > 0)
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  else
    std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
