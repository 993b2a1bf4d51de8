#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bt/corpus.hpp"

namespace bt::textnorm {

// Tokens are non-empty and contain no whitespace.
using TokenizedSentence = std::vector<std::string>;

// Rule-based tokenizer: split on whitespace, isolate Ethiopic wordspace and
// punctuation U+1361..U+1368 wherever they occur, then detach leading/trailing
// punctuation one codepoint at a time. Internal punctuation stays attached, so
// apostrophes, hyphens and decimal numbers ("3.5") survive intact.
// Idempotent on its own output; drops no non-whitespace character.
TokenizedSentence tokenize(std::string_view sentence, std::string_view lang = {});

// Joins with spaces, then removes the space before closing punctuation and
// after opening brackets/quotes. Language-agnostic.
std::string detokenize(const TokenizedSentence& tokens, std::string_view lang = {});

// Plain single-space join.
std::string join(const TokenizedSentence& tokens);

// Consonantal-skeleton normalization for Ge'ez-script text: every codepoint in
// U+1200..U+1377 is rounded down to its 8-aligned family base (the vowel-order
// offset is discarded), the combining marks U+135D..U+135F are removed, and
// everything else passes through unchanged. Idempotent.
std::string strip_vowel_marks(std::string_view token);

// Line-wise tokenize over a corpus; each output sentence is the space-joined
// token list.
corpus::Corpus tokenize_corpus(const corpus::Corpus& c);

}  // namespace bt::textnorm
