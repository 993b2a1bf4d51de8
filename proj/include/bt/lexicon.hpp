#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bt/subword.hpp"

namespace bt::lexicon {

struct DictEntry {
  std::string tgt_word, rel_word;
  unsigned distance = 0;
  bool operator==(const DictEntry&) const = default;
};

// Scored (tgt, rel, distance) pairs; canonical order is
// (tgt_word, distance, rel count descending, rel_word).
struct BilingualDictionary {
  std::string tgt_lang, rel_lang;
  std::vector<DictEntry> pairs;
};

// Unicode-codepoint edit distance (insert/delete/substitute, unit costs).
unsigned levenshtein(std::string_view a, std::string_view b);

// Banded variant: returns the distance when it is <= max_d, nullopt otherwise.
// A length gap greater than max_d short-circuits.
std::optional<unsigned> levenshtein_within(std::string_view a, std::string_view b,
                                           unsigned max_d);

struct InduceOptions {
  unsigned max_dist = 2;
  std::uint64_t min_count = 5;
};

// For every tgt word with count >= min_count, emits all rel words with count >=
// min_count whose consonantal-normalized forms are within max_dist. Matching
// runs on normalized forms; emitted pairs carry the original words. Parallel
// over tgt words, deterministic output order.
BilingualDictionary induce_dictionary(const subword::Vocabulary& vocab_tgt,
                                      std::string tgt_lang,
                                      const subword::Vocabulary& vocab_rel,
                                      std::string rel_lang, const InduceOptions& opts);

// TSV: tgt_word <TAB> rel_word <TAB> distance.
void save_dictionary(const BilingualDictionary& d, const std::string& path);
BilingualDictionary load_dictionary(const std::string& path, std::string tgt_lang = {},
                                    std::string rel_lang = {});

}  // namespace bt::lexicon
