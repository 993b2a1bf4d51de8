#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bt::corpus {

// Monolingual corpus: one sentence per element, no line breaks inside a
// sentence. Every operation preserves order unless documented otherwise.
struct Corpus {
  std::string lang;
  std::vector<std::string> sentences;
};

struct SentencePair {
  std::string src, tgt;
  bool operator==(const SentencePair&) const = default;
};

struct ParallelCorpus {
  std::string src_lang, tgt_lang;
  std::vector<SentencePair> pairs;
};

struct SplitSpec {
  std::size_t dev_n = 0;
  std::size_t test_n = 0;
  std::uint64_t seed = 0;
};

struct CleanRules {
  bool drop_control = true;        // lines with C0 controls other than tab
  bool collapse_whitespace = true; // runs of whitespace -> one space, trimmed
  bool drop_empty = true;          // empty / whitespace-only lines
  std::size_t max_tokens = 250;    // 0 disables the length rule
  // Script rule: off while `script` is empty. Known scripts: "ethiopic",
  // "latin". The fraction is computed over word characters only (not spaces,
  // digits or punctuation); lines with no word characters pass.
  std::string script;
  double min_script_fraction = 0.5;
};

struct CleanStats {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t dropped_control = 0;
  std::size_t dropped_empty = 0;
  std::size_t dropped_too_long = 0;
  std::size_t dropped_script = 0;
};

// One sentence per LF-terminated line; a trailing final newline does not add
// an empty sentence. Empty lines are an error unless keep_empty is set.
// Invalid UTF-8 raises FormatError with the line number.
Corpus load_corpus(const std::string& path, std::string lang, bool keep_empty = false);
void save_corpus(const Corpus& c, const std::string& path);

// Rule-based line filter/normalizer; never fails, drops instead. Runs the
// per-line rules in parallel; output order matches the serial result.
Corpus clean(const Corpus& c, const CleanRules& rules, CleanStats* stats = nullptr);
ParallelCorpus clean_parallel(const ParallelCorpus& p, const CleanRules& rules,
                              CleanStats* stats = nullptr);

// Exact dedup, first occurrence wins.
Corpus dedup(const Corpus& c);
ParallelCorpus dedup_parallel(const ParallelCorpus& p);  // keyed on the pair

struct SplitResult {
  ParallelCorpus train, dev, test;
};

// Seeded shuffle of indices, then prefix slices: dev, test, train. The shuffle
// stream is derived from (spec.seed, "corpus.split") so other stages seeded
// from the same master seed draw independent streams.
SplitResult split(const ParallelCorpus& p, const SplitSpec& spec);

// Concatenation, authentic first. No provenance markers are added.
ParallelCorpus mix(const ParallelCorpus& authentic, const ParallelCorpus& synthetic);

// Two aligned files, or a single two-column TSV. Line-count / column mismatch
// is a hard error.
ParallelCorpus load_parallel(const std::string& src_path, const std::string& tgt_path,
                             std::string src_lang, std::string tgt_lang,
                             bool keep_empty = false);
ParallelCorpus load_parallel_tsv(const std::string& path, std::string src_lang,
                                 std::string tgt_lang, bool keep_empty = false);
void save_parallel(const ParallelCorpus& p, const std::string& src_path,
                   const std::string& tgt_path);
void save_parallel_tsv(const ParallelCorpus& p, const std::string& path);

// FNV-1a 64 over the serialized corpus; used in manifests.
std::uint64_t checksum(const Corpus& c);
std::uint64_t checksum(const ParallelCorpus& p);

}  // namespace bt::corpus
