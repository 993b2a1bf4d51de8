#include "bt/textnorm.hpp"

#include <gtest/gtest.h>

#include <map>

#include "bt/rng.hpp"
#include "bt/utf8.hpp"
#include "testutil.hh"

using namespace bt;
using textnorm::TokenizedSentence;

TEST(Tokenize, DetachesPunctuation) {
  EXPECT_EQ(textnorm::tokenize("Hello, world!"),
            (TokenizedSentence{"Hello", ",", "world", "!"}));
}

TEST(Tokenize, PlainWord) {
  EXPECT_EQ(textnorm::tokenize("ab"), (TokenizedSentence{"ab"}));
}

TEST(Tokenize, EthiopicFullStopSplits) {
  EXPECT_EQ(textnorm::tokenize("ሰላም።"), (TokenizedSentence{"ሰላም", "።"}));
}

TEST(Tokenize, EthiopicWordspaceSplitsAnywhere) {
  // U+1361 even with no surrounding whitespace.
  EXPECT_EQ(textnorm::tokenize("ሰላም፡ዓለም"), (TokenizedSentence{"ሰላም", "፡", "ዓለም"}));
}

TEST(Tokenize, KeepsDecimalNumbersIntact) {
  EXPECT_EQ(textnorm::tokenize("pi is 3.5."), (TokenizedSentence{"pi", "is", "3.5", "."}));
}

TEST(Tokenize, KeepsInternalApostropheAndHyphen) {
  EXPECT_EQ(textnorm::tokenize("don't re-do"), (TokenizedSentence{"don't", "re-do"}));
}

TEST(Tokenize, LeadingAndNestedPunctuation) {
  EXPECT_EQ(textnorm::tokenize("(3.5)!"), (TokenizedSentence{"(", "3.5", ")", "!"}));
  EXPECT_EQ(textnorm::tokenize("\"quoted\""), (TokenizedSentence{"\"", "quoted", "\""}));
  EXPECT_EQ(textnorm::tokenize("!!"), (TokenizedSentence{"!", "!"}));
}

TEST(Tokenize, EmptyAndWhitespaceOnly) {
  EXPECT_TRUE(textnorm::tokenize("").empty());
  EXPECT_TRUE(textnorm::tokenize("  \t ").empty());
}

namespace {

std::string random_text(rng::SplitMix64& g, std::size_t len) {
  static const std::vector<std::string> pieces = {
      "a", "b", "c", " ", " ", ".", ",", "!", "(", ")", "'", "-", "3", "5",
      "ሀ", "ሰ", "ላ", "ም", "።", "፡", "አ"};
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += pieces[g.below(pieces.size())];
  return s;
}

std::map<char32_t, int> nonspace_chars(const std::string& s) {
  std::map<char32_t, int> m;
  for (char32_t cp : utf8::decode_lossy(s))
    if (!utf8::is_space(cp)) ++m[cp];
  return m;
}

}  // namespace

TEST(Tokenize, IdempotentOnItsOwnOutput) {
  rng::SplitMix64 g(21);
  for (int iter = 0; iter < 500; ++iter) {
    const std::string s = random_text(g, 1 + g.below(30));
    const TokenizedSentence once = textnorm::tokenize(s);
    EXPECT_EQ(textnorm::tokenize(textnorm::join(once)), once) << "input: " << s;
  }
}

TEST(Tokenize, PreservesNonWhitespaceCharacters) {
  rng::SplitMix64 g(22);
  for (int iter = 0; iter < 500; ++iter) {
    const std::string s = random_text(g, 1 + g.below(30));
    std::map<char32_t, int> before = nonspace_chars(s);
    std::map<char32_t, int> after;
    for (const auto& tok : textnorm::tokenize(s))
      for (const auto& [cp, n] : nonspace_chars(tok)) after[cp] += n;
    EXPECT_EQ(before, after) << "input: " << s;
  }
}

TEST(Detokenize, ReattachesPunctuation) {
  EXPECT_EQ(textnorm::detokenize({"Hello", ",", "world", "!"}), "Hello, world!");
  EXPECT_EQ(textnorm::detokenize({"ab"}), "ab");
  EXPECT_EQ(textnorm::detokenize({}), "");
}

TEST(Detokenize, BracketsAndQuotes) {
  EXPECT_EQ(textnorm::detokenize({"(", "a", ")"}), "(a)");
  EXPECT_EQ(textnorm::detokenize({"ሰላም", "።"}), "ሰላም።");
}

TEST(StripVowelMarks, RoundsToFamilyBase) {
  EXPECT_EQ(textnorm::strip_vowel_marks("ህ"), "ሀ");  // hhaa -> ha family
  EXPECT_EQ(textnorm::strip_vowel_marks("abc"), "abc");
  EXPECT_EQ(textnorm::strip_vowel_marks("አ"), "አ");  // already a base
}

TEST(StripVowelMarks, RemovesCombiningMarks) {
  EXPECT_EQ(textnorm::strip_vowel_marks("ሀ፝"), "ሀ");
  EXPECT_EQ(textnorm::strip_vowel_marks("፟"), "");
}

TEST(StripVowelMarks, WholeBlockAlignedAndIdempotent) {
  for (char32_t cp = 0x1200; cp <= 0x137F; ++cp) {
    std::string in;
    utf8::append(in, cp);
    const std::string once = textnorm::strip_vowel_marks(in);
    EXPECT_EQ(textnorm::strip_vowel_marks(once), once);
    if (cp <= 0x1377 && !(cp >= 0x135D && cp <= 0x135F)) {
      const auto out = utf8::decode(once);
      ASSERT_EQ(out.size(), 1u);
      EXPECT_EQ((out[0] - 0x1200) % 8, 0u) << std::hex << static_cast<unsigned>(cp);
    }
  }
}

TEST(StripVowelMarks, LeavesOtherScriptsAlone) {
  const std::string mixed = "abc ΔΕΖ 漢字 Ꭰ";  // Latin, Greek, CJK, Cherokee
  EXPECT_EQ(textnorm::strip_vowel_marks(mixed), mixed);
}

TEST(TokenizeCorpus, OrderPreserving) {
  corpus::Corpus c{"ti", {"Hello, world!", "ሰላም።", "ab"}};
  const corpus::Corpus out = textnorm::tokenize_corpus(c);
  EXPECT_EQ(out.sentences,
            (std::vector<std::string>{"Hello , world !", "ሰላም ።", "ab"}));
  EXPECT_EQ(out.lang, "ti");
}
