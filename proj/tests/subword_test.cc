#include "bt/subword.hpp"

#include <gtest/gtest.h>

#include "bt/errors.hpp"
#include "bt/reference.hpp"
#include "bt/rng.hpp"
#include "testutil.hh"

using namespace bt;
using subword::BpeModel;
using subword::Vocabulary;
using Merges = std::vector<std::pair<std::string, std::string>>;

namespace {

Vocabulary vocab_of(std::initializer_list<std::pair<std::string, std::uint64_t>> items) {
  Vocabulary v;
  for (const auto& [w, c] : items) v.entries[w] = c;
  return v;
}

Vocabulary random_vocab(rng::SplitMix64& g, std::size_t n_words,
                        std::string_view alphabet = "abc") {
  Vocabulary v;
  for (std::size_t i = 0; i < n_words; ++i)
    v.entries[testutil::random_word(g, 1, 6, alphabet)] += 1 + g.below(9);
  return v;
}

}  // namespace

TEST(BuildVocab, CountsTokens) {
  EXPECT_EQ(subword::build_vocab({"ti", {"a b a"}}).entries,
            (std::unordered_map<std::string, std::uint64_t>{{"a", 2}, {"b", 1}}));
  EXPECT_TRUE(subword::build_vocab({"ti", {}}).entries.empty());
  EXPECT_EQ(subword::build_vocab({"ti", {"x x x"}}).entries.at("x"), 3u);
}

TEST(BpeLearn, HandSimulatedVocabulary) {
  const Vocabulary v = vocab_of({{"abab", 1}, {"abc", 1}});
  EXPECT_EQ(subword::bpe_learn(v, 1).merges, (Merges{{"a", "b"}}));
  // After merging (a,b) every candidate ties at count 1; the lexicographically
  // smallest pair wins.
  EXPECT_EQ(subword::bpe_learn(v, 2).merges, (Merges{{"a", "b"}, {"a", "b</w>"}}));
  EXPECT_TRUE(subword::bpe_learn(v, 0).merges.empty());
}

TEST(BpeLearn, StopsAtExhaustion) {
  const BpeModel m = subword::bpe_learn(vocab_of({{"ab", 2}}), 1000);
  // "ab" has one pair, then one symbol: exactly one merge is possible.
  EXPECT_EQ(m.merges, (Merges{{"a", "b</w>"}}));
}

TEST(BpeLearn, DeterministicAndPrefixMonotone) {
  rng::SplitMix64 g(31);
  for (int iter = 0; iter < 10; ++iter) {
    const Vocabulary v = random_vocab(g, 2 + g.below(20));
    const BpeModel a = subword::bpe_learn(v, 12);
    const BpeModel b = subword::bpe_learn(v, 12);
    EXPECT_EQ(a.merges, b.merges);
    for (std::size_t k = 0; k < 12; ++k) {
      const BpeModel mk = subword::bpe_learn(v, k);
      const BpeModel mk1 = subword::bpe_learn(v, k + 1);
      ASSERT_LE(mk.merges.size(), mk1.merges.size());
      EXPECT_TRUE(std::equal(mk.merges.begin(), mk.merges.end(), mk1.merges.begin()));
    }
  }
}

TEST(BpeLearn, MatchesRecountingReference) {
  rng::SplitMix64 g(32);
  for (int iter = 0; iter < 30; ++iter) {
    const Vocabulary v = random_vocab(g, 1 + g.below(30), "abcd");
    const std::size_t k = g.below(40);
    EXPECT_EQ(subword::bpe_learn(v, k).merges, reference::bpe_learn(v, k).merges);
  }
}

TEST(BpeApply, HandExamples) {
  BpeModel m;
  m.merges = {{"a", "b"}};
  EXPECT_EQ(subword::bpe_apply(m, {"abb"}), (std::vector<std::string>{"ab", "b</w>"}));
  EXPECT_EQ(subword::bpe_apply(BpeModel{}, {"ab"}),
            (std::vector<std::string>{"a", "b</w>"}));
  EXPECT_EQ(subword::bpe_apply(m, {"ba"}), (std::vector<std::string>{"b", "a</w>"}));
}

TEST(BpeApply, MultiTokenSentence) {
  BpeModel m;
  // The final "b" of "abab" carries the marker, so only the first (a,b) site
  // merges; the second word still splits to characters plus one merge.
  m.merges = {{"a", "b"}, {"ab", "a"}};
  EXPECT_EQ(subword::bpe_apply(m, {"abab", "ab"}),
            (std::vector<std::string>{"aba", "b</w>", "a", "b</w>"}));
}

TEST(BpeApply, MatchesRestartScanReference) {
  rng::SplitMix64 g(33);
  for (int iter = 0; iter < 40; ++iter) {
    const Vocabulary v = random_vocab(g, 1 + g.below(20));
    const BpeModel m = subword::bpe_learn(v, g.below(25));
    textnorm::TokenizedSentence t;
    for (std::size_t i = 0, n = 1 + g.below(8); i < n; ++i)
      t.push_back(testutil::random_word(g, 1, 8, "abcd"));
    EXPECT_EQ(subword::bpe_apply(m, t), reference::bpe_apply(m, t));
  }
}

TEST(BpeDecode, JoinsOnMarker) {
  const std::vector<std::string> a{"ab", "b</w>"};
  EXPECT_EQ(subword::bpe_decode(a), (textnorm::TokenizedSentence{"abb"}));
  const std::vector<std::string> b{"a</w>", "b</w>"};
  EXPECT_EQ(subword::bpe_decode(b), (textnorm::TokenizedSentence{"a", "b"}));
}

TEST(BpeDecode, DanglingSubwordIsFormatError) {
  const std::vector<std::string> bad{"a"};
  EXPECT_THROW(subword::bpe_decode(bad), FormatError);
}

TEST(BpeRoundTrip, DecodeInvertsApply) {
  rng::SplitMix64 g(34);
  const Vocabulary v = random_vocab(g, 40, "abcdef");
  const BpeModel m = subword::bpe_learn(v, 30);
  std::vector<std::string> words(v.entries.size());
  std::size_t i = 0;
  for (const auto& [w, c] : v.entries) words[i++] = w;
  for (int iter = 0; iter < 1000; ++iter) {
    textnorm::TokenizedSentence t;
    for (std::size_t k = 0, n = 1 + g.below(10); k < n; ++k) {
      // Mix in-vocabulary words with unseen ones.
      t.push_back(g.below(4) == 0 ? testutil::random_word(g, 1, 9, "abcdefgh")
                                  : words[g.below(words.size())]);
    }
    EXPECT_EQ(subword::bpe_decode(subword::bpe_apply(m, t), m.eow_marker), t);
  }
}

TEST(BpeRoundTrip, GeezText) {
  const Vocabulary v = vocab_of({{"ሰላም", 4}, {"ሰላማት", 2}, {"ዓለም", 3}});
  const BpeModel m = subword::bpe_learn(v, 5);
  const textnorm::TokenizedSentence t{"ሰላም", "ዓለም", "ሰላማት"};
  EXPECT_EQ(subword::bpe_decode(subword::bpe_apply(m, t), m.eow_marker), t);
}

TEST(BpeApplyCorpus, MatchesSerialReference) {
  rng::SplitMix64 g(35);
  const Vocabulary v = random_vocab(g, 60, "abcde");
  const BpeModel m = subword::bpe_learn(v, 40);
  corpus::Corpus c{"ti", {}};
  for (int i = 0; i < 800; ++i)
    c.sentences.push_back(testutil::random_sentence(g, 0, 14, "abcde"));
  const corpus::Corpus fast = subword::bpe_apply_corpus(m, c);
  const corpus::Corpus ref = reference::bpe_apply_corpus(m, c);
  EXPECT_EQ(fast.sentences, ref.sentences);
  EXPECT_EQ(fast.lang, "ti");
}

TEST(BpeModelIo, RoundTrip) {
  testutil::TempDir tmp;
  BpeModel m;
  m.merges = {{"a", "b"}, {"ab", "c</w>"}, {"ሰ", "ላ"}};
  m.eow_marker = "</w>";
  const auto path = (tmp.path() / "m.bpe").string();
  subword::save_model(m, path);
  const BpeModel back = subword::load_model(path);
  EXPECT_EQ(back.merges, m.merges);
  EXPECT_EQ(back.eow_marker, m.eow_marker);
}

TEST(BpeModelIo, RejectsBadFiles) {
  testutil::TempDir tmp;
  EXPECT_THROW(subword::load_model(tmp.write("h.bpe", "nope\n")), FormatError);
  EXPECT_THROW(subword::load_model(tmp.write("c.bpe", "bpe v1 </w>\nab\n")), FormatError);
  EXPECT_THROW(subword::load_model(tmp.write("d.bpe", "bpe v1 </w>\na\tb\na\tb\n")),
               FormatError);
  EXPECT_THROW(subword::load_model("/nonexistent/m.bpe"), IoError);
}
