#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bt/corpus.hpp"
#include "bt/textnorm.hpp"

namespace bt::subword {

// Ordered merge list; earlier entries have higher priority. The end-of-word
// marker is carried by the last character symbol of each word ("b</w>"), not
// as a symbol of its own.
struct BpeModel {
  std::vector<std::pair<std::string, std::string>> merges;
  std::string eow_marker = "</w>";
};

struct Vocabulary {
  std::unordered_map<std::string, std::uint64_t> entries;
};

// Exact token frequencies of a whitespace-tokenized corpus.
Vocabulary build_vocab(const corpus::Corpus& tokenized);
void add_to_vocab(Vocabulary& vocab, const corpus::Corpus& tokenized);

// Greedy pair-merge learning. Each step merges the most frequent adjacent
// symbol pair; ties go to the lexicographically smallest (left, right) pair by
// code-point order. Runs until num_merges merges are recorded or no adjacent
// pair remains. Deterministic; the k-merge model is a prefix of the (k+1)-merge
// model on the same vocabulary.
BpeModel bpe_learn(const Vocabulary& vocab, std::size_t num_merges,
                   std::string eow_marker = "</w>");

// Splits each word into character symbols (marker on the last one), then
// repeatedly applies the earliest-listed merge that still occurs, at every
// site left to right, until none applies.
std::vector<std::string> bpe_apply(const BpeModel& m, const textnorm::TokenizedSentence& t);

// Inverse of bpe_apply. A final subword without the marker is a format error.
textnorm::TokenizedSentence bpe_decode(std::span<const std::string> subwords,
                                       const std::string& eow_marker = "</w>");

// Corpus-level application; parallel over unique words, order-preserving.
corpus::Corpus bpe_apply_corpus(const BpeModel& m, const corpus::Corpus& tokenized);
corpus::Corpus bpe_decode_corpus(const corpus::Corpus& subword_corpus,
                                 const std::string& eow_marker = "</w>");

// Model file: header "bpe v1 <eow_marker>", then one "left<TAB>right" per line.
void save_model(const BpeModel& m, const std::string& path);
BpeModel load_model(const std::string& path);

}  // namespace bt::subword
