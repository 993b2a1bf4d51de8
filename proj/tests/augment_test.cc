#include "bt/augment.hpp"

#include <gtest/gtest.h>

#include "bt/errors.hpp"
#include "bt/rng.hpp"
#include "testutil.hh"

using namespace bt;
using augment::BtStrategy;
using augment::StrategyKind;
using corpus::Corpus;
using corpus::ParallelCorpus;
using translate::TranslatorPtr;

namespace {

class MockTranslator final : public translate::Translator {
 public:
  using Fn = std::function<std::string(const std::string&)>;
  MockTranslator(std::string src, std::string tgt, Fn fn)
      : Translator(std::move(src), std::move(tgt), "mock"), fn_(std::move(fn)) {}

 protected:
  std::vector<std::string> do_translate(const std::vector<std::string>& in) const override {
    std::vector<std::string> out;
    for (const auto& s : in) out.push_back(fn_(s));
    return out;
  }

 private:
  Fn fn_;
};

TranslatorPtr reversing(std::string src, std::string tgt) {
  return std::make_shared<MockTranslator>(std::move(src), std::move(tgt),
                                          [](const std::string& s) {
                                            return std::string(s.rbegin(), s.rend());
                                          });
}

ParallelCorpus authentic_corpus(std::size_t n) {
  ParallelCorpus p{"en", "ti", {}};
  for (std::size_t i = 0; i < n; ++i)
    p.pairs.push_back({"src" + std::to_string(i), "tgt" + std::to_string(i)});
  return p;
}

}  // namespace

TEST(Backtranslate, PairsSyntheticWithAuthenticTarget) {
  const Corpus mono{"ti", {"ab", "cd"}};
  const auto res = augment::backtranslate(mono, reversing("ti", "en"));
  EXPECT_EQ(res.synthetic.pairs,
            (std::vector<corpus::SentencePair>{{"ba", "ab"}, {"dc", "cd"}}));
  EXPECT_EQ(res.synthetic.src_lang, "en");
  EXPECT_EQ(res.synthetic.tgt_lang, "ti");
  EXPECT_EQ(res.dropped(), 0u);
}

TEST(Backtranslate, IdentityTranslator) {
  const Corpus mono{"ti", {"x"}};
  const auto res = augment::backtranslate(mono, translate::identity_translator("ti", "en"));
  EXPECT_EQ(res.synthetic.pairs, (std::vector<corpus::SentencePair>{{"x", "x"}}));
}

TEST(Backtranslate, DropsEmptySyntheticSides) {
  const auto emptier = std::make_shared<MockTranslator>(
      "ti", "en", [](const std::string& s) { return s == "two" ? "  " : "ok " + s; });
  const Corpus mono{"ti", {"one", "two", "three"}};
  const auto res = augment::backtranslate(mono, emptier);
  ASSERT_EQ(res.synthetic.pairs.size(), 2u);
  EXPECT_EQ(res.dropped_empty, 1u);
  EXPECT_EQ(res.synthetic.pairs[0].tgt, "one");
  EXPECT_EQ(res.synthetic.pairs[1].tgt, "three");
}

TEST(Backtranslate, LanguageMismatchNeedsOptIn) {
  const Corpus mono{"ti", {"x"}};
  const TranslatorPtr am_en = translate::identity_translator("am", "en");
  EXPECT_THROW(augment::backtranslate(mono, am_en), ConfigError);
  augment::BacktranslateOptions opts;
  opts.allow_lang_mismatch = true;
  EXPECT_EQ(augment::backtranslate(mono, am_en, opts).synthetic.pairs.size(), 1u);
}

TEST(Backtranslate, LengthRatioFilterIsOptIn) {
  const auto expander = std::make_shared<MockTranslator>(
      "ti", "en", [](const std::string&) {
        std::string s = "w";
        for (int i = 0; i < 50; ++i) s += " w";
        return s;
      });
  const Corpus mono{"ti", {"a b c"}};
  EXPECT_EQ(augment::backtranslate(mono, expander).synthetic.pairs.size(), 1u);
  augment::BacktranslateOptions opts;
  opts.length_ratio_filter = true;
  const auto res = augment::backtranslate(mono, expander, opts);
  EXPECT_TRUE(res.synthetic.pairs.empty());
  EXPECT_EQ(res.dropped_ratio, 1u);
}

TEST(RunStrategy, DirectCounts) {
  const Corpus mono{"ti", {"m1", "m2"}};
  BtStrategy cfg;
  cfg.kind = StrategyKind::Direct;
  cfg.tgt_to_src = translate::identity_translator("ti", "en");
  const auto r = augment::run_strategy(cfg, mono, authentic_corpus(3), 7);
  EXPECT_EQ(r.mixed.pairs.size(), 5u);
  EXPECT_EQ(r.manifest.mixed_count, 5u);
  EXPECT_EQ(r.manifest.dropped, 0u);
  EXPECT_EQ(r.manifest.strategy, "direct");
  // Authentic first.
  EXPECT_EQ(r.mixed.pairs[0].src, "src0");
  EXPECT_EQ(r.mixed.pairs[3].tgt, "m1");
}

TEST(RunStrategy, PivotWithIdentityStagesEqualsDirect) {
  const Corpus mono{"ti", {"m1", "m2"}};
  BtStrategy direct;
  direct.kind = StrategyKind::Direct;
  direct.tgt_to_src = translate::identity_translator("ti", "en");
  BtStrategy piv;
  piv.kind = StrategyKind::PivotSup;
  piv.tgt_to_rel = translate::identity_translator("ti", "am");
  piv.rel_to_src = translate::identity_translator("am", "en");
  const auto a = augment::run_strategy(direct, mono, authentic_corpus(3), 7);
  const auto b = augment::run_strategy(piv, mono, authentic_corpus(3), 7);
  EXPECT_EQ(a.mixed.pairs, b.mixed.pairs);
}

TEST(RunStrategy, PivotSupAndUnsupProduceIdenticalCorpora) {
  const Corpus mono{"ti", {"m1", "m2", "m3"}};
  BtStrategy sup;
  sup.kind = StrategyKind::PivotSup;
  sup.tgt_to_rel = reversing("ti", "am");
  sup.rel_to_src = reversing("am", "en");
  BtStrategy unsup = sup;
  unsup.kind = StrategyKind::PivotUnsup;
  const auto a = augment::run_strategy(sup, mono, authentic_corpus(2), 9);
  const auto b = augment::run_strategy(unsup, mono, authentic_corpus(2), 9);
  EXPECT_EQ(a.mixed.pairs, b.mixed.pairs);
  EXPECT_EQ(a.manifest.mixed_checksum, b.manifest.mixed_checksum);
  EXPECT_NE(a.manifest.strategy, b.manifest.strategy);
}

TEST(RunStrategy, IndirectFeedsTgtTextToRelBackend) {
  // A rel->src dictionary that misses every tgt word copies them all.
  lexicon::BilingualDictionary d;
  d.tgt_lang = "am";
  d.rel_lang = "en";
  d.pairs = {{"amword", "enword", 0}};
  BtStrategy cfg;
  cfg.kind = StrategyKind::Indirect;
  cfg.rel_to_src = translate::dictionary_translator(d, translate::DictDirection::TgtToRel);
  const Corpus mono{"ti", {"tiword other"}};
  const auto r = augment::run_strategy(cfg, mono, authentic_corpus(1), 7);
  ASSERT_EQ(r.mixed.pairs.size(), 2u);
  EXPECT_EQ(r.mixed.pairs[1].src, "tiword other");  // verbatim OOV copy
  EXPECT_FALSE(r.manifest.notes.empty());
}

TEST(RunStrategy, TargetSideAuthenticity) {
  rng::SplitMix64 g(71);
  Corpus mono{"ti", {}};
  for (int i = 0; i < 100; ++i)
    mono.sentences.push_back(testutil::random_sentence(g, 1, 7));
  BtStrategy cfg;
  cfg.kind = StrategyKind::PivotUnsup;
  cfg.tgt_to_rel = reversing("ti", "am");
  cfg.rel_to_src = reversing("am", "en");
  const auto r = augment::run_strategy(cfg, mono, authentic_corpus(5), 7);
  ASSERT_EQ(r.mixed.pairs.size(), 105u);
  for (std::size_t i = 0; i < mono.sentences.size(); ++i)
    EXPECT_EQ(r.mixed.pairs[5 + i].tgt, mono.sentences[i]);
}

TEST(RunStrategy, MixedCountInvariantWithDrops) {
  const auto spotty = std::make_shared<MockTranslator>(
      "ti", "en", [](const std::string& s) { return s.size() % 3 == 0 ? "" : s; });
  rng::SplitMix64 g(72);
  Corpus mono{"ti", {}};
  for (int i = 0; i < 200; ++i)
    mono.sentences.push_back(testutil::random_sentence(g, 1, 5));
  BtStrategy cfg;
  cfg.kind = StrategyKind::Direct;
  cfg.tgt_to_src = spotty;
  const auto r = augment::run_strategy(cfg, mono, authentic_corpus(17), 7);
  EXPECT_EQ(r.mixed.pairs.size(), 17u + 200u - r.manifest.dropped);
  EXPECT_EQ(r.manifest.synthetic_count + r.manifest.dropped, r.manifest.mono_count);
  EXPECT_GT(r.manifest.dropped, 0u);
}

TEST(RunStrategy, DeterministicRerunsMinusTimestamp) {
  const Corpus mono{"ti", {"aa bb", "cc"}};
  BtStrategy cfg;
  cfg.kind = StrategyKind::PivotSup;
  cfg.tgt_to_rel = reversing("ti", "am");
  cfg.rel_to_src = reversing("am", "en");
  auto a = augment::run_strategy(cfg, mono, authentic_corpus(2), 42);
  auto b = augment::run_strategy(cfg, mono, authentic_corpus(2), 42);
  EXPECT_EQ(a.mixed.pairs, b.mixed.pairs);
  auto ja = a.manifest.to_json();
  auto jb = b.manifest.to_json();
  ja["timestamp"] = jb["timestamp"] = "";
  EXPECT_EQ(ja, jb);
}

TEST(RunStrategy, ConfigurationErrors) {
  const Corpus mono{"ti", {"x"}};
  BtStrategy missing;
  missing.kind = StrategyKind::PivotSup;
  missing.tgt_to_rel = translate::identity_translator("ti", "am");
  EXPECT_THROW(augment::run_strategy(missing, mono, authentic_corpus(1), 7), ConfigError);

  BtStrategy wrong_chain;
  wrong_chain.kind = StrategyKind::Direct;
  wrong_chain.tgt_to_src = translate::identity_translator("ti", "fr");
  EXPECT_THROW(augment::run_strategy(wrong_chain, mono, authentic_corpus(1), 7),
               ConfigError);
}

TEST(StrategyKindNames, RoundTrip) {
  for (auto k : {StrategyKind::Direct, StrategyKind::Indirect, StrategyKind::PivotSup,
                 StrategyKind::PivotUnsup})
    EXPECT_EQ(augment::kind_from_name(augment::kind_name(k)), k);
  EXPECT_THROW(augment::kind_from_name("sideways"), ConfigError);
}
