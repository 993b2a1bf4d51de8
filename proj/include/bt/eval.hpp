#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bt/corpus.hpp"

namespace bt::eval {

struct Precision {
  std::uint64_t matched = 0;
  std::uint64_t total = 0;
};

struct BleuReport {
  double bleu = 0.0;              // [0, 100]
  double brevity_penalty = 1.0;   // (0, 1]
  std::array<Precision, 4> precisions;
  std::uint64_t hyp_len = 0, ref_len = 0;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

// Corpus-level single-reference BLEU on whitespace tokens, n = 1..4, uniform
// weights, clipped counts summed over sentences before division, no smoothing
// (any zero matched order gives score 0). BP = 1 when hyp_len > ref_len, else
// exp(1 - ref_len/hyp_len).
BleuReport bleu(const corpus::Corpus& hyps, const corpus::Corpus& refs);

// Sentence-level diagnostic score: add-one smoothing on orders 2..4, order 1
// unsmoothed.
double sentence_bleu(const std::string& hyp, const std::string& ref);

struct PhraseRow {
  std::string ngram;
  std::uint64_t correct = 0;    // sum over sentences of min(hyp count, ref count)
  std::uint64_t ref_count = 0;  // total occurrences in references
  double accuracy = 0.0;
};

struct PhraseReportOptions {
  unsigned n_min = 1;
  unsigned n_max = 4;
  std::uint64_t min_ref_count = 1;
  std::size_t top_k = 100;
};

// Rows sorted by correct desc, accuracy desc, then n-gram; truncated to top_k.
std::vector<PhraseRow> phrase_accuracy_report(const corpus::Corpus& hyps,
                                              const corpus::Corpus& refs,
                                              const PhraseReportOptions& opts);

struct ComparisonRow {
  std::string hyp_a, hyp_b, ref;
  double bleu_a = 0.0, bleu_b = 0.0;
  double delta = 0.0;  // bleu_a - bleu_b
};

std::vector<ComparisonRow> compare_systems(const corpus::Corpus& hyps_a,
                                           const corpus::Corpus& hyps_b,
                                           const corpus::Corpus& refs);

}  // namespace bt::eval
