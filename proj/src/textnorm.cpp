#include "bt/textnorm.hpp"

#include "bt/utf8.hpp"

namespace bt::textnorm {

namespace {

constexpr char32_t kEthiopicBase = 0x1200;
constexpr char32_t kEthiopicLast = 0x1377;
constexpr char32_t kEthiopicMarkFirst = 0x135D;
constexpr char32_t kEthiopicMarkLast = 0x135F;
constexpr char32_t kEthiopicPunctFirst = 0x1361;
constexpr char32_t kEthiopicPunctLast = 0x1368;

bool is_ethiopic_punct(char32_t cp) {
  return cp >= kEthiopicPunctFirst && cp <= kEthiopicPunctLast;
}

// One whitespace-free chunk -> tokens.
void split_chunk(std::u32string_view chunk, TokenizedSentence& out) {
  std::size_t start = 0;
  for (std::size_t i = 0; i <= chunk.size(); ++i) {
    const bool cut = i == chunk.size() || is_ethiopic_punct(chunk[i]);
    if (!cut) continue;
    std::u32string_view piece = chunk.substr(start, i - start);
    if (!piece.empty()) {
      std::size_t lo = 0, hi = piece.size();
      while (lo < hi && utf8::is_punct(piece[lo])) ++lo;
      // Leading punctuation, one token per codepoint.
      for (std::size_t k = 0; k < lo; ++k) out.push_back(utf8::encode(piece.substr(k, 1)));
      while (hi > lo && utf8::is_punct(piece[hi - 1])) --hi;
      if (hi > lo) out.push_back(utf8::encode(piece.substr(lo, hi - lo)));
      for (std::size_t k = hi; k < piece.size(); ++k)
        out.push_back(utf8::encode(piece.substr(k, 1)));
    }
    if (i < chunk.size()) out.push_back(utf8::encode(chunk.substr(i, 1)));
    start = i + 1;
  }
}

bool is_closing(std::u32string_view tok) {
  if (tok.size() != 1) return false;
  switch (tok[0]) {
    case U',':
    case U'.':
    case U';':
    case U':':
    case U'!':
    case U'?':
    case U')':
    case U']':
    case U'}':
    case U'%':
    case 0xBB:    // right guillemet
    case 0x2019:  // right single quote
    case 0x201D:  // right double quote
    case 0x2026:  // ellipsis
    case 0x3001:  // ideographic comma
    case 0x3002:  // ideographic full stop
      return true;
    default:
      return is_ethiopic_punct(tok[0]) || tok[0] == 0x1360;
  }
}

bool is_opening(std::u32string_view tok) {
  if (tok.size() != 1) return false;
  switch (tok[0]) {
    case U'(':
    case U'[':
    case U'{':
    case 0xAB:    // left guillemet
    case 0x2018:  // left single quote
    case 0x201C:  // left double quote
      return true;
    default:
      return false;
  }
}

}  // namespace

TokenizedSentence tokenize(std::string_view sentence, std::string_view /*lang*/) {
  const std::u32string cps = utf8::decode_lossy(sentence);
  TokenizedSentence out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= cps.size(); ++i) {
    if (i < cps.size() && !utf8::is_space(cps[i])) continue;
    if (i > start) split_chunk(std::u32string_view(cps).substr(start, i - start), out);
    start = i + 1;
  }
  return out;
}

std::string detokenize(const TokenizedSentence& tokens, std::string_view /*lang*/) {
  std::string out;
  bool suppress_space = true;  // no space at the very start
  for (const auto& tok : tokens) {
    const std::u32string cps = utf8::decode_lossy(tok);
    if (!suppress_space && !is_closing(cps)) out.push_back(' ');
    out += tok;
    suppress_space = is_opening(cps);
  }
  return out;
}

std::string join(const TokenizedSentence& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string strip_vowel_marks(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  std::size_t i = 0;
  char32_t cp;
  while (i < token.size()) {
    const std::size_t n = utf8::decode_one(token, i, cp);
    if (n == 0) {  // malformed byte: pass through unchanged
      out.push_back(token[i]);
      ++i;
      continue;
    }
    i += n;
    if (cp >= kEthiopicMarkFirst && cp <= kEthiopicMarkLast) continue;
    if (cp >= kEthiopicBase && cp <= kEthiopicLast) cp -= (cp - kEthiopicBase) % 8;
    utf8::append(out, cp);
  }
  return out;
}

corpus::Corpus tokenize_corpus(const corpus::Corpus& c) {
  corpus::Corpus out;
  out.lang = c.lang;
  out.sentences.resize(c.sentences.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (long long i = 0; i < static_cast<long long>(c.sentences.size()); ++i)
    out.sentences[i] = join(tokenize(c.sentences[i]));
  return out;
}

}  // namespace bt::textnorm
