#pragma once

// Plain serial reference implementations of the parallel kernels, plus the
// independent oracles the test suites check against. Everything here favors
// being obviously correct over being fast; nothing here shares code with the
// optimized paths it validates.

#include "bt/corpus.hpp"
#include "bt/eval.hpp"
#include "bt/lexicon.hpp"
#include "bt/subword.hpp"

namespace bt::reference {

// Serial line-by-line clean with straightforward string handling.
corpus::Corpus clean(const corpus::Corpus& c, const corpus::CleanRules& rules,
                     corpus::CleanStats* stats = nullptr);

// Textbook recurrence evaluated by exhaustive recursion (memoized); the oracle
// for the DP implementations.
unsigned levenshtein_recursive(std::string_view a, std::string_view b);

// Brute-force all-pairs filter with a plain full-matrix DP.
lexicon::BilingualDictionary induce_dictionary(const subword::Vocabulary& vocab_tgt,
                                               std::string tgt_lang,
                                               const subword::Vocabulary& vocab_rel,
                                               std::string rel_lang,
                                               const lexicon::InduceOptions& opts);

// Recount-everything-each-step learner; same contract as subword::bpe_learn.
subword::BpeModel bpe_learn(const subword::Vocabulary& vocab, std::size_t num_merges,
                            std::string eow_marker = "</w>");

// Restart-scan application; same contract as subword::bpe_apply.
std::vector<std::string> bpe_apply(const subword::BpeModel& m,
                                   const textnorm::TokenizedSentence& t);
corpus::Corpus bpe_apply_corpus(const subword::BpeModel& m, const corpus::Corpus& tokenized);

// Sentence-at-a-time serial BLEU.
eval::BleuReport bleu(const corpus::Corpus& hyps, const corpus::Corpus& refs);

}  // namespace bt::reference
