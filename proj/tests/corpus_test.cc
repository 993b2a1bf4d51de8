#include "bt/corpus.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "bt/errors.hpp"
#include "bt/reference.hpp"
#include "bt/rng.hpp"
#include "testutil.hh"

using namespace bt;
using corpus::Corpus;
using corpus::ParallelCorpus;
using testutil::TempDir;

namespace {

Corpus make(std::vector<std::string> lines, std::string lang = "ti") {
  return Corpus{std::move(lang), std::move(lines)};
}

ParallelCorpus make_pairs(std::vector<corpus::SentencePair> pairs,
                          std::string src_lang = "en", std::string tgt_lang = "ti") {
  return ParallelCorpus{std::move(src_lang), std::move(tgt_lang), std::move(pairs)};
}

}  // namespace

TEST(LoadCorpus, ReadsLinesInOrder) {
  TempDir tmp;
  const auto path = tmp.write("a.txt", "a\nb\n");
  const Corpus c = corpus::load_corpus(path, "ti");
  EXPECT_EQ(c.lang, "ti");
  EXPECT_EQ(c.sentences, (std::vector<std::string>{"a", "b"}));
}

TEST(LoadCorpus, EmptyFile) {
  TempDir tmp;
  const Corpus c = corpus::load_corpus(tmp.write("e.txt", ""), "ti");
  EXPECT_TRUE(c.sentences.empty());
}

TEST(LoadCorpus, MissingFinalNewline) {
  TempDir tmp;
  const Corpus c = corpus::load_corpus(tmp.write("n.txt", "a\nb"), "ti");
  EXPECT_EQ(c.sentences, (std::vector<std::string>{"a", "b"}));
}

TEST(LoadCorpus, EmptyLineIsAnErrorByDefault) {
  TempDir tmp;
  const auto path = tmp.write("g.txt", "a\n\nb\n");
  try {
    corpus::load_corpus(path, "ti");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  const Corpus c = corpus::load_corpus(path, "ti", /*keep_empty=*/true);
  EXPECT_EQ(c.sentences, (std::vector<std::string>{"a", "", "b"}));
}

TEST(LoadCorpus, InvalidUtf8ReportsLine) {
  TempDir tmp;
  const auto path = tmp.write("u.txt", "ok\n\xC3(bad\n");
  try {
    corpus::load_corpus(path, "ti");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(LoadCorpus, MissingFile) {
  EXPECT_THROW(corpus::load_corpus("/nonexistent/nope.txt", "ti"), IoError);
}

TEST(Clean, DropsWhitespaceOnlyAndControlLines) {
  corpus::CleanStats st;
  const Corpus out =
      corpus::clean(make({"ok", "  ", std::string("x\0y", 3)}), corpus::CleanRules{}, &st);
  EXPECT_EQ(out.sentences, (std::vector<std::string>{"ok"}));
  EXPECT_EQ(st.dropped_empty, 1u);
  EXPECT_EQ(st.dropped_control, 1u);
  EXPECT_EQ(st.kept, 1u);
  EXPECT_EQ(st.input, 3u);
}

TEST(Clean, DropsOverlongLines) {
  std::string line;
  for (int i = 0; i < 300; ++i) line += "tok ";
  corpus::CleanRules rules;
  rules.max_tokens = 250;
  corpus::CleanStats st;
  const Corpus out = corpus::clean(make({line}), rules, &st);
  EXPECT_TRUE(out.sentences.empty());
  EXPECT_EQ(st.dropped_too_long, 1u);
}

TEST(Clean, CollapsesWhitespace) {
  const Corpus out = corpus::clean(make({"a   b"}), corpus::CleanRules{});
  EXPECT_EQ(out.sentences, (std::vector<std::string>{"a b"}));
}

TEST(Clean, TabIsWhitespaceNotControl) {
  const Corpus out = corpus::clean(make({"a\tb"}), corpus::CleanRules{});
  EXPECT_EQ(out.sentences, (std::vector<std::string>{"a b"}));
}

TEST(Clean, ScriptRule) {
  corpus::CleanRules rules;
  rules.script = "ethiopic";
  const Corpus out =
      corpus::clean(make({"ሰላም ናይ ዓለም", "hello world", "ሰላም hi", "ሰላም hello"}), rules);
  // 0.5 fraction over word characters: "ሰላም hi" is 3/5 Ethiopic and passes,
  // "ሰላም hello" is 3/8 and drops.
  EXPECT_EQ(out.sentences, (std::vector<std::string>{"ሰላም ናይ ዓለም", "ሰላም hi"}));
}

TEST(Clean, RulesToggleOff) {
  corpus::CleanRules rules;
  rules.drop_empty = false;
  rules.collapse_whitespace = false;
  rules.drop_control = false;
  rules.max_tokens = 0;
  const Corpus in = make({"", "a   b", std::string("x\0y", 3)});
  const Corpus out = corpus::clean(in, rules);
  EXPECT_EQ(out.sentences, in.sentences);
}

TEST(Clean, IsIdempotent) {
  rng::SplitMix64 g(11);
  std::vector<std::string> lines;
  for (int i = 0; i < 500; ++i) {
    std::string s = testutil::random_sentence(g, 1, 12, "ab.\t ");
    if (g.below(10) == 0) s += "\x01";
    lines.push_back(std::move(s));
  }
  const corpus::CleanRules rules;
  const Corpus once = corpus::clean(make(lines), rules);
  const Corpus twice = corpus::clean(once, rules);
  EXPECT_EQ(once.sentences, twice.sentences);
}

TEST(Clean, MatchesSerialReference) {
  rng::SplitMix64 g(12);
  std::vector<std::string> lines;
  for (int i = 0; i < 2000; ++i) {
    std::string s = testutil::random_sentence(g, 1, 40, "abcd\t ");
    if (g.below(7) == 0) s.push_back('\x02');
    if (g.below(5) == 0) s += "   ";
    lines.push_back(std::move(s));
  }
  corpus::CleanRules rules;
  rules.max_tokens = 30;
  corpus::CleanStats st_par, st_ref;
  const Corpus par = corpus::clean(make(lines), rules, &st_par);
  const Corpus ref = reference::clean(make(lines), rules, &st_ref);
  EXPECT_EQ(par.sentences, ref.sentences);
  EXPECT_EQ(st_par.kept, st_ref.kept);
  EXPECT_EQ(st_par.dropped_control, st_ref.dropped_control);
  EXPECT_EQ(st_par.dropped_empty, st_ref.dropped_empty);
  EXPECT_EQ(st_par.dropped_too_long, st_ref.dropped_too_long);
}

TEST(Dedup, KeepsFirstOccurrence) {
  EXPECT_EQ(corpus::dedup(make({"a", "b", "a"})).sentences,
            (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(corpus::dedup(make({"a", "a", "a"})).sentences, (std::vector<std::string>{"a"}));
  EXPECT_TRUE(corpus::dedup(make({})).sentences.empty());
}

TEST(Dedup, Idempotent) {
  rng::SplitMix64 g(3);
  std::vector<std::string> lines;
  for (int i = 0; i < 300; ++i) lines.push_back(testutil::random_word(g, 1, 3, "ab"));
  const Corpus once = corpus::dedup(make(lines));
  EXPECT_EQ(corpus::dedup(once).sentences, once.sentences);
}

TEST(DedupParallel, KeyedOnThePair) {
  const ParallelCorpus out =
      corpus::dedup_parallel(make_pairs({{"a", "x"}, {"a", "x"}, {"a", "y"}}));
  EXPECT_EQ(out.pairs, (std::vector<corpus::SentencePair>{{"a", "x"}, {"a", "y"}}));

  const ParallelCorpus distinct =
      corpus::dedup_parallel(make_pairs({{"a", "x"}, {"b", "x"}}));
  EXPECT_EQ(distinct.pairs.size(), 2u);
  EXPECT_TRUE(corpus::dedup_parallel(make_pairs({})).pairs.empty());
}

namespace {

std::vector<corpus::SentencePair> sorted_pairs(const ParallelCorpus& p) {
  auto v = p.pairs;
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return std::tie(a.src, a.tgt) < std::tie(b.src, b.tgt);
  });
  return v;
}

}  // namespace

TEST(Split, PartitionsWithRequestedSizes) {
  std::vector<corpus::SentencePair> pairs;
  for (int i = 0; i < 10; ++i)
    pairs.push_back({"s" + std::to_string(i), "t" + std::to_string(i)});
  const ParallelCorpus p = make_pairs(pairs);
  const auto r = corpus::split(p, {2, 2, 7});
  EXPECT_EQ(r.dev.pairs.size(), 2u);
  EXPECT_EQ(r.test.pairs.size(), 2u);
  EXPECT_EQ(r.train.pairs.size(), 6u);

  ParallelCorpus all = make_pairs({});
  for (const auto* part : {&r.train, &r.dev, &r.test})
    all.pairs.insert(all.pairs.end(), part->pairs.begin(), part->pairs.end());
  EXPECT_EQ(sorted_pairs(all), sorted_pairs(p));
  // Disjoint index sets: the union has no duplicates because the input had none.
  EXPECT_EQ(corpus::dedup_parallel(all).pairs.size(), 10u);
}

TEST(Split, DeterministicInSeed) {
  std::vector<corpus::SentencePair> pairs;
  for (int i = 0; i < 50; ++i) pairs.push_back({"s" + std::to_string(i), "t"});
  const ParallelCorpus p = make_pairs(pairs);
  const auto a = corpus::split(p, {5, 5, 7});
  const auto b = corpus::split(p, {5, 5, 7});
  EXPECT_EQ(a.train.pairs, b.train.pairs);
  EXPECT_EQ(a.dev.pairs, b.dev.pairs);
  EXPECT_EQ(a.test.pairs, b.test.pairs);
  const auto other = corpus::split(p, {5, 5, 8});
  EXPECT_NE(a.dev.pairs, other.dev.pairs);  // overwhelmingly likely
}

TEST(Split, TwoThousandDevTest) {
  std::vector<corpus::SentencePair> pairs;
  for (int i = 0; i < 6000; ++i) pairs.push_back({"s" + std::to_string(i), "t"});
  const auto r = corpus::split(make_pairs(pairs), {2000, 2000, 1});
  EXPECT_EQ(r.dev.pairs.size(), 2000u);
  EXPECT_EQ(r.test.pairs.size(), 2000u);
  EXPECT_EQ(r.train.pairs.size(), 2000u);
}

TEST(Split, RejectsOversizedSpec) {
  const ParallelCorpus p = make_pairs({{"a", "b"}, {"c", "d"}});
  EXPECT_THROW(corpus::split(p, {1, 1, 0}), DataError);
  EXPECT_THROW(corpus::split(p, {5, 5, 0}), DataError);
}

TEST(Mix, AuthenticFirstNoMarkers) {
  const ParallelCorpus a = make_pairs({{"a1", "x1"}, {"a2", "x2"}, {"a3", "x3"}});
  const ParallelCorpus s = make_pairs({{"s1", "y1"}, {"s2", "y2"}});
  const ParallelCorpus out = corpus::mix(a, s);
  ASSERT_EQ(out.pairs.size(), 5u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(out.pairs[i], a.pairs[i]);
  for (int i = 0; i < 2; ++i) EXPECT_EQ(out.pairs[3 + i], s.pairs[i]);
}

TEST(Mix, EmptyIsIdentity) {
  const ParallelCorpus a = make_pairs({{"a", "x"}});
  EXPECT_EQ(corpus::mix(a, make_pairs({})).pairs, a.pairs);
  EXPECT_EQ(corpus::mix(make_pairs({}), a).pairs, a.pairs);
}

TEST(Mix, LanguageTagMismatch) {
  const ParallelCorpus a = make_pairs({{"a", "x"}}, "en", "ti");
  const ParallelCorpus s = make_pairs({{"b", "y"}}, "en", "am");
  EXPECT_THROW(corpus::mix(a, s), ConfigError);
}

TEST(ParallelIo, PairFilesRoundTrip) {
  TempDir tmp;
  const ParallelCorpus p = make_pairs({{"hello", "ሰላም"}, {"big world", "ዓለም"}});
  const auto src = (tmp.path() / "c.en").string();
  const auto tgt = (tmp.path() / "c.ti").string();
  corpus::save_parallel(p, src, tgt);
  const ParallelCorpus back = corpus::load_parallel(src, tgt, "en", "ti");
  EXPECT_EQ(back.pairs, p.pairs);
}

TEST(ParallelIo, LineCountMismatchIsHardError) {
  TempDir tmp;
  const auto src = tmp.write("a.src", "one\ntwo\n");
  const auto tgt = tmp.write("a.tgt", "uno\n");
  EXPECT_THROW(corpus::load_parallel(src, tgt, "en", "ti"), FormatError);
}

TEST(ParallelIo, TsvRoundTripAndColumnErrors) {
  TempDir tmp;
  const ParallelCorpus p = make_pairs({{"a b", "x"}, {"c", "y z"}});
  const auto path = (tmp.path() / "c.tsv").string();
  corpus::save_parallel_tsv(p, path);
  EXPECT_EQ(corpus::load_parallel_tsv(path, "en", "ti").pairs, p.pairs);

  EXPECT_THROW(corpus::load_parallel_tsv(tmp.write("bad.tsv", "no tab here\n"), "en", "ti"),
               FormatError);
  EXPECT_THROW(corpus::load_parallel_tsv(tmp.write("bad2.tsv", "a\tb\tc\n"), "en", "ti"),
               FormatError);
}

TEST(Checksum, SensitiveToContent) {
  EXPECT_NE(corpus::checksum(make({"a", "b"})), corpus::checksum(make({"a", "c"})));
  EXPECT_NE(corpus::checksum(make({"ab"})), corpus::checksum(make({"a", "b"})));
}
