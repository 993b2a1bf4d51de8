#include "bt/pipeline.hpp"

#include <gtest/gtest.h>

#include <fstream>

#include "bt/corpus.hpp"
#include "bt/errors.hpp"
#include "bt/subword.hpp"
#include "testutil.hh"

using namespace bt;
using nlohmann::json;
using pipeline::PipelineConfig;
using testutil::TempDir;

namespace {

// A tiny world: authentic en-ti pairs, ti mono, and a ti->en dictionary.
struct World {
  TempDir tmp;
  json cfg;

  World() {
    tmp.write("mono.ti", "kab kiy\nkiy\nkab zur\n");
    tmp.write("train.en", "dog cat\nbird\n");
    tmp.write("train.ti", "kab kiy\nzur\n");
    tmp.write("ti_en.tsv", "kab\tdog\t0\nkiy\tcat\t0\nzur\tbird\t0\n");
    cfg = json{
        {"seed", 42},
        {"corpora",
         {{"mono_tgt", {{"path", "mono.ti"}, {"lang", "ti"}}},
          {"authentic",
           {{"src", "train.en"},
            {"tgt", "train.ti"},
            {"src_lang", "en"},
            {"tgt_lang", "ti"}}}}},
        {"strategy", "direct"},
        {"backends", {{"tgt_to_src", "dict:ti_en.tsv:fwd"}}},
        {"output", {{"dir", "out"}}},
    };
  }

  PipelineConfig config() const { return PipelineConfig::from_json(cfg, tmp.path()); }
};

}  // namespace

TEST(ValidateConfig, AcceptsMinimalDirectConfig) {
  World w;
  const auto v = pipeline::validate_config(w.config());
  ASSERT_TRUE(v.ok()) << (v.errors.empty() ? "" : v.errors[0]);
  ASSERT_GE(v.plan.stages.size(), 4u);
  EXPECT_EQ(v.plan.stages.front().name, "load");
  EXPECT_EQ(v.plan.stages.back().name, "write");
}

TEST(ValidateConfig, ReportsAllErrorsAtOnce) {
  World w;
  w.cfg.erase("seed");
  w.cfg["strategy"] = "pivot_sup";  // needs rel_lang + two backends
  w.cfg["backends"] = json::object();
  const auto v = pipeline::validate_config(w.config());
  ASSERT_FALSE(v.ok());
  EXPECT_GE(v.errors.size(), 4u);
  bool saw_seed = false, saw_tgt_to_rel = false, saw_rel_to_src = false, saw_rel = false;
  for (const auto& e : v.errors) {
    saw_seed |= e.find("seed") != std::string::npos;
    saw_tgt_to_rel |= e.find("tgt_to_rel") != std::string::npos;
    saw_rel_to_src |= e.find("rel_to_src") != std::string::npos;
    saw_rel |= e.find("rel_lang") != std::string::npos;
  }
  EXPECT_TRUE(saw_seed);
  EXPECT_TRUE(saw_tgt_to_rel);
  EXPECT_TRUE(saw_rel_to_src);
  EXPECT_TRUE(saw_rel);
}

TEST(ValidateConfig, MissingFilesAndUnknownSections) {
  World w;
  w.cfg["corpora"]["mono_tgt"]["path"] = "missing.ti";
  w.cfg["strateg"] = "typo";
  const auto v = pipeline::validate_config(w.config());
  ASSERT_FALSE(v.ok());
  bool saw_missing = false, saw_unknown = false;
  for (const auto& e : v.errors) {
    saw_missing |= e.find("missing.ti") != std::string::npos;
    saw_unknown |= e.find("strateg") != std::string::npos;
  }
  EXPECT_TRUE(saw_missing);
  EXPECT_TRUE(saw_unknown);
}

TEST(ValidateConfig, OptionalSectionsAreTypeChecked) {
  World w;
  w.cfg["eval"] = {{"n_min", 3}, {"n_max", 2}};
  EXPECT_FALSE(pipeline::validate_config(w.config()).ok());
  w.cfg["eval"] = {{"n_min", 1}, {"n_max", 4}, {"top_k", 50}};
  EXPECT_TRUE(pipeline::validate_config(w.config()).ok());
  w.cfg["lexicon"] = "not an object";
  EXPECT_FALSE(pipeline::validate_config(w.config()).ok());
  w.cfg["lexicon"] = {{"max_dist", 2}, {"min_count", 5}};
  EXPECT_TRUE(pipeline::validate_config(w.config()).ok());
  w.cfg["backend_options"] = {{"batch_size", 0}};
  EXPECT_FALSE(pipeline::validate_config(w.config()).ok());
  w.cfg["backend_options"] = {{"batch_size", 16}, {"timeout_sec", 1.5}};
  EXPECT_TRUE(pipeline::validate_config(w.config()).ok());
}

TEST(ValidateConfig, BackendSpecShapes) {
  World w;
  w.cfg["backends"]["tgt_to_src"] = "warp:drive";
  EXPECT_FALSE(pipeline::validate_config(w.config()).ok());
  w.cfg["backends"]["tgt_to_src"] = "dict:ti_en.tsv:sideways";
  EXPECT_FALSE(pipeline::validate_config(w.config()).ok());
  w.cfg["backends"]["tgt_to_src"] = "cmd:cat";
  EXPECT_TRUE(pipeline::validate_config(w.config()).ok());
  w.cfg["backends"]["tgt_to_src"] = "http://localhost:9999/t";
  EXPECT_TRUE(pipeline::validate_config(w.config()).ok());
}

TEST(Run, DirectStrategyWritesOutputsAndManifest) {
  World w;
  const auto outs = pipeline::run(w.config());
  const corpus::ParallelCorpus mixed = corpus::load_parallel(
      outs.mixed_src.string(), outs.mixed_tgt.string(), "en", "ti");
  // 2 authentic + 3 synthetic.
  ASSERT_EQ(mixed.pairs.size(), 5u);
  EXPECT_EQ(mixed.pairs[0].src, "dog cat");
  EXPECT_EQ(mixed.pairs[2].src, "dog cat");  // "kab kiy" through the dictionary
  EXPECT_EQ(mixed.pairs[2].tgt, "kab kiy");

  std::ifstream mf(outs.manifest);
  ASSERT_TRUE(mf.good());
  json manifest;
  mf >> manifest;
  EXPECT_EQ(manifest["augment"]["strategy"], "direct");
  EXPECT_EQ(manifest["augment"]["outputs"]["mixed_count"], 5);
  EXPECT_EQ(manifest["pipeline"]["config"]["seed"], 42);
}

TEST(Run, RerunsAreByteIdentical) {
  World w;
  const auto a = pipeline::run(w.config());
  const std::string src1 = testutil::read_file(a.mixed_src.string());
  const std::string tgt1 = testutil::read_file(a.mixed_tgt.string());
  const auto b = pipeline::run(w.config());
  EXPECT_EQ(testutil::read_file(b.mixed_src.string()), src1);
  EXPECT_EQ(testutil::read_file(b.mixed_tgt.string()), tgt1);
}

TEST(Run, PivotStrategyWithPreprocessingAndBpe) {
  World w;
  w.tmp.write("ti_am.tsv", "kab\tkob\t1\nkiy\tkoy\t1\nzur\tzor\t1\n");
  w.tmp.write("am_en.tsv", "kob\tdog\t0\nkoy\tcat\t0\nzor\tbird\t0\n");
  w.cfg["strategy"] = "pivot_unsup";
  w.cfg["rel_lang"] = "am";
  w.cfg["backends"] = {{"tgt_to_rel", "dict:ti_am.tsv:fwd"},
                       {"rel_to_src", "dict:am_en.tsv:fwd"}};
  w.cfg["preprocessing"] = {{"clean", true}, {"dedup", true}, {"bpe_merges", 10}};
  const auto outs = pipeline::run(w.config());
  const corpus::ParallelCorpus mixed = corpus::load_parallel(
      outs.mixed_src.string(), outs.mixed_tgt.string(), "en", "ti");
  ASSERT_EQ(mixed.pairs.size(), 5u);
  EXPECT_EQ(mixed.pairs[4].src, "dog bird");  // "kab zur" through two hops

  EXPECT_TRUE(std::filesystem::exists(outs.bpe_model));
  EXPECT_TRUE(std::filesystem::exists(outs.bpe_src));
  // The BPE files decode back to the mixed corpus text.
  const auto model = subword::load_model(outs.bpe_model.string());
  const auto applied = corpus::load_corpus(outs.bpe_src.string(), "en", true);
  const auto decoded = subword::bpe_decode_corpus(applied, model.eow_marker);
  const auto plain = corpus::load_corpus(outs.mixed_src.string(), "en", true);
  EXPECT_EQ(decoded.sentences, plain.sentences);
}

TEST(Run, InvalidConfigThrowsWithAllErrors) {
  World w;
  w.cfg.erase("output");
  w.cfg.erase("seed");
  try {
    pipeline::run(w.config());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("seed"), std::string::npos);
    EXPECT_NE(msg.find("output"), std::string::npos);
  }
}

TEST(PipelineConfigIo, LoadsFromDiskAndResolvesRelativePaths) {
  World w;
  const auto cfg_path = w.tmp.write("cfg.json", w.cfg.dump());
  const auto cfg = PipelineConfig::load(cfg_path);
  EXPECT_TRUE(pipeline::validate_config(cfg).ok());
  EXPECT_THROW(PipelineConfig::load((w.tmp.path() / "nope.json").string()), IoError);
  EXPECT_THROW(PipelineConfig::load(w.tmp.write("broken.json", "{not json")), FormatError);
}
