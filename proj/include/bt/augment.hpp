#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bt/corpus.hpp"
#include "bt/translate.hpp"

namespace bt::augment {

enum class StrategyKind { Direct, Indirect, PivotSup, PivotUnsup };

std::string_view kind_name(StrategyKind k);
StrategyKind kind_from_name(std::string_view name);  // throws ConfigError

// Which translators a strategy needs:
//   Direct     tgt_to_src
//   Indirect   rel_to_src (deliberately applied to tgt text)
//   PivotSup / PivotUnsup   tgt_to_rel plus rel_to_src; the two kinds differ
//   only in the provenance recorded for the tgt_to_rel backend.
struct BtStrategy {
  StrategyKind kind = StrategyKind::Direct;
  translate::TranslatorPtr tgt_to_src;
  translate::TranslatorPtr rel_to_src;
  translate::TranslatorPtr tgt_to_rel;
};

struct BacktranslateOptions {
  bool allow_lang_mismatch = false;  // Indirect sets this
  bool length_ratio_filter = false;  // off by default, mirroring no filtering
  double min_ratio = 0.1;
  double max_ratio = 10.0;
};

struct BacktranslateResult {
  corpus::ParallelCorpus synthetic;  // (synthetic src, authentic tgt)
  std::size_t dropped_empty = 0;
  std::size_t dropped_ratio = 0;

  std::size_t dropped() const { return dropped_empty + dropped_ratio; }
};

// pair i = (backward(mono[i]), mono[i]); pairs whose synthetic side is empty
// after trimming are dropped and counted. The target side is never altered.
BacktranslateResult backtranslate(const corpus::Corpus& mono_tgt,
                                  const translate::TranslatorPtr& backward,
                                  const BacktranslateOptions& opts = {});

// Reproducibility record written alongside the output corpora.
struct AugmentManifest {
  std::string strategy;
  std::string mono_lang;
  std::size_t mono_count = 0;
  std::string mono_checksum;
  std::string authentic_langs;
  std::size_t authentic_count = 0;
  std::string authentic_checksum;
  std::string backward_id;
  std::vector<std::string> notes;
  std::size_t dropped = 0;
  std::size_t synthetic_count = 0;
  std::size_t mixed_count = 0;
  std::string mixed_checksum;
  std::uint64_t seed = 0;
  std::string timestamp;  // ISO-8601 UTC; the only non-reproducible field

  nlohmann::json to_json() const;
};

struct RunResult {
  corpus::ParallelCorpus mixed;
  AugmentManifest manifest;
};

// Builds the backward translator for the strategy, back-translates, mixes
// authentic-first, and fills in the manifest.
RunResult run_strategy(const BtStrategy& cfg, const corpus::Corpus& mono_tgt,
                       const corpus::ParallelCorpus& authentic, std::uint64_t seed,
                       const BacktranslateOptions& opts = {});

}  // namespace bt::augment
