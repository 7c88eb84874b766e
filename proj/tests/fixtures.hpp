#pragma once

#include <string>
#include <vector>

#include "lvckit/conllu.hpp"
#include "lvckit/supervision.hpp"

namespace fixtures {

// Five hand-built sentences covering comments, a multiword range, an empty
// node, empty FEATS, a missing lemma, and explicit compound:lvc arcs.
inline const char* kCorpus =
    "# sent_id = fx-1\n"
    "# text = Ali karar verdi .\n"
    "1\tAli\tAli\tPROPN\t_\tCase=Nom\t3\tnsubj\t_\t_\n"
    "2\tkarar\tkarar\tNOUN\t_\tCase=Nom\t3\tcompound:lvc\t_\t_\n"
    "3\tverdi\tver\tVERB\t_\tAspect=Perf|Tense=Past\t0\troot\t_\tSpaceAfter=No\n"
    "4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n"
    "\n"
    "# sent_id = fx-2\n"
    "# text = Kahvalti yaptik mi ?\n"
    "1-2\tKahvaltiyaptik\t_\t_\t_\t_\t_\t_\t_\t_\n"
    "1\tKahvalti\tkahvalti\tNOUN\t_\tCase=Nom\t2\tobj\t_\t_\n"
    "2\tyaptik\t_\tVERB\t_\tTense=Past\t0\troot\t_\t_\n"
    "3\tmi\tmi\tAUX\t_\t_\t2\taux:q\t_\t_\n"
    "4\t?\t?\tPUNCT\t_\t_\t2\tpunct\t_\t_\n"
    "\n"
    "# sent_id = fx-3\n"
    "# text = Kitap okudum ve gazete\n"
    "1\tKitap\tkitap\tNOUN\t_\t_\t2\tobj\t_\t_\n"
    "2\tokudum\toku\tVERB\t_\t_\t0\troot\t_\t_\n"
    "2.1\tokudum\toku\tVERB\t_\t_\t_\t_\t_\t_\n"
    "3\tve\tve\tCCONJ\t_\t_\t4\tcc\t_\t_\n"
    "4\tgazete\tgazete\tNOUN\t_\t_\t2\tconj\t_\t_\n"
    "\n"
    "# sent_id = fx-4\n"
    "# text = Yardim etti ve soz verdi .\n"
    "1\tYardim\tyardim\tNOUN\t_\tCase=Nom\t2\tcompound:lvc\t_\t_\n"
    "2\tetti\tet\tVERB\t_\tTense=Past\t0\troot\t_\t_\n"
    "3\tve\tve\tCCONJ\t_\t_\t5\tcc\t_\t_\n"
    "4\tsoz\tsoz\tNOUN\t_\tCase=Nom\t5\tcompound:lvc\t_\t_\n"
    "5\tverdi\tver\tVERB\t_\tTense=Past\t2\tconj\t_\t_\n"
    "6\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_\n"
    "\n"
    "1\tgitti\tgit\tVERB\t_\t_\t0\troot\t_\t_\n"
    "2\t.\t.\tPUNCT\t_\t_\t1\tpunct\t_\t_\n";

// Hand counts for kCorpus.
inline constexpr std::size_t kCorpusSentences = 5;
inline constexpr std::size_t kCorpusTokens[5] = {4, 4, 4, 6, 2};
inline constexpr std::size_t kCorpusEmptyNodes = 1;
inline constexpr std::size_t kCorpusExplicitArcs = 3;  // fx-1: 1, fx-4: 2

// Noun-verb fallback treebank: no compound:lvc anywhere. Only nv-1
// qualifies (NOUN dependent, VERB head); nv-2 has an ADJ dependent, nv-3 a
// NOUN head, nv-4 a PROPN dependent.
inline const char* kNvCorpus =
    "# sent_id = nv-1\n"
    "# text = Kahvalti yaptim\n"
    "1\tKahvalti\tkahvalti\tNOUN\t_\t_\t2\tcompound\t_\t_\n"
    "2\tyaptim\tyap\tVERB\t_\t_\t0\troot\t_\t_\n"
    "\n"
    "# sent_id = nv-2\n"
    "# text = buyuk oldu\n"
    "1\tbuyuk\tbuyuk\tADJ\t_\t_\t2\tcompound\t_\t_\n"
    "2\toldu\tol\tVERB\t_\t_\t0\troot\t_\t_\n"
    "\n"
    "# sent_id = nv-3\n"
    "# text = demir yolu\n"
    "1\tdemir\tdemir\tNOUN\t_\t_\t2\tcompound\t_\t_\n"
    "2\tyolu\tyol\tNOUN\t_\t_\t0\troot\t_\t_\n"
    "\n"
    "# sent_id = nv-4\n"
    "# text = Ankara gitti\n"
    "1\tAnkara\tAnkara\tPROPN\t_\t_\t2\tcompound\t_\t_\n"
    "2\tgitti\tgit\tVERB\t_\t_\t0\troot\t_\t_\n";

// A root VERB at token 1 plus arc_count NOUN dependents carrying
// compound:lvc arcs, plus filler PRON tokens up to length.
inline lvc::Sentence make_lvc_sentence(const std::string& sent_id,
                                       int arc_count, int filler = 1) {
  lvc::Sentence s;
  s.sent_id = sent_id;
  int id = 1;
  lvc::Token verb;
  verb.id = id++;
  verb.form = "etti";
  verb.lemma = "et";
  verb.upos = "VERB";
  verb.head = 0;
  verb.deprel = "root";
  s.tokens.push_back(verb);
  for (int k = 0; k < arc_count; ++k) {
    lvc::Token noun;
    noun.id = id++;
    noun.form = "is" + std::to_string(k);
    noun.lemma = "is" + std::to_string(k);
    noun.upos = "NOUN";
    noun.head = 1;
    noun.deprel = "compound:lvc";
    s.tokens.push_back(noun);
  }
  for (int k = 0; k < filler; ++k) {
    lvc::Token pron;
    pron.id = id++;
    pron.form = "o";
    pron.lemma = "o";
    pron.upos = "PRON";
    pron.head = 1;
    pron.deprel = "nsubj";
    s.tokens.push_back(pron);
  }
  s.text.clear();
  for (const lvc::Token& t : s.tokens) {
    if (!s.text.empty()) s.text += ' ';
    s.text += t.form;
  }
  return s;
}

}  // namespace fixtures
