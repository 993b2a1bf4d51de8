// btaug: back-translation data augmentation toolkit for low-resource MT.
//
// Subcommands cover the full non-neural data path: corpus hygiene (clean,
// dedup, split, mix), text normalization (tokenize, normalize-geez), subword
// models (bpe-learn, bpe-apply, bpe-decode), lexicon induction (dict-induce),
// embedding alignment (align-emb, nn-lookup), back-translation orchestration
// (backtranslate, run-strategy) and evaluation (bleu, phrase-report, compare).
//
// Exit codes: 0 success, 1 validation/input errors, 2 backend or wire-protocol
// errors. Diagnostics go to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bt/augment.hpp"
#include "bt/corpus.hpp"
#include "bt/embalign.hpp"
#include "bt/errors.hpp"
#include "bt/eval.hpp"
#include "bt/lexicon.hpp"
#include "bt/pipeline.hpp"
#include "bt/runtime.hpp"
#include "bt/subword.hpp"
#include "bt/textnorm.hpp"
#include "bt/translate.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "btaug 0.1.0";

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) s.push_back(digits[(v >> shift) & 0xF]);
  return s;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Every corpus-writing subcommand records what it read and wrote.
struct ManifestWriter {
  json j;
  bool enabled = true;
  std::string path;

  explicit ManifestWriter(const std::string& command) {
    j["tool"] = kVersion;
    j["command"] = command;
    j["timestamp"] = utc_now();
  }
  void input(const std::string& name, const std::string& file, std::uint64_t checksum,
             std::size_t count) {
    j["inputs"][name] = {{"path", file}, {"checksum", hex64(checksum)}, {"count", count}};
  }
  void output(const std::string& name, const std::string& file, std::uint64_t checksum,
              std::size_t count) {
    j["outputs"][name] = {{"path", file}, {"checksum", hex64(checksum)}, {"count", count}};
    if (path.empty()) path = file + ".manifest.json";
  }
  void param(const std::string& key, json value) { j["params"][key] = std::move(value); }
  void write() const {
    if (!enabled || path.empty()) return;
    std::ofstream out(path);
    if (!out) throw bt::IoError("cannot write manifest " + path);
    out << j.dump(2) << '\n';
  }
};

// Parallel-corpus input/output flags shared by dedup, split and mix: either a
// .src/.tgt file pair or a single two-column TSV.
struct ParallelIn {
  std::string src, tgt, tsv;
  std::string src_lang = "src", tgt_lang = "tgt";

  void add_flags(CLI::App* cmd, const std::string& prefix = "") {
    const std::string dash = prefix.empty() ? "--" : "--" + prefix + "-";
    cmd->add_option(dash + "src", src, "source-side text file");
    cmd->add_option(dash + "tgt", tgt, "target-side text file");
    cmd->add_option(dash + "tsv", tsv, "two-column TSV instead of a file pair");
  }
  bt::corpus::ParallelCorpus load(bool keep_empty = false) const {
    if (!tsv.empty()) {
      if (!src.empty() || !tgt.empty())
        throw bt::ConfigError("give either --src/--tgt or --tsv, not both");
      return bt::corpus::load_parallel_tsv(tsv, src_lang, tgt_lang, keep_empty);
    }
    if (src.empty() || tgt.empty())
      throw bt::ConfigError("a parallel corpus needs --src and --tgt (or --tsv)");
    return bt::corpus::load_parallel(src, tgt, src_lang, tgt_lang, keep_empty);
  }
  std::string describe() const { return tsv.empty() ? src + "," + tgt : tsv; }
};

struct ParallelOut {
  std::string src, tgt, tsv;

  void add_flags(CLI::App* cmd, const std::string& prefix = "out") {
    cmd->add_option("--" + prefix + "-src", src, "source-side output file");
    cmd->add_option("--" + prefix + "-tgt", tgt, "target-side output file");
    cmd->add_option("--" + prefix + "-tsv", tsv, "two-column TSV output");
  }
  std::string save(const bt::corpus::ParallelCorpus& p) const {
    if (!tsv.empty()) {
      bt::corpus::save_parallel_tsv(p, tsv);
      return tsv;
    }
    if (src.empty() || tgt.empty())
      throw bt::ConfigError("output needs --out-src and --out-tgt (or --out-tsv)");
    bt::corpus::save_parallel(p, src, tgt);
    return src;
  }
};

void add_clean_rule_flags(CLI::App* cmd, bt::corpus::CleanRules& rules) {
  cmd->add_flag("--no-drop-empty", [&rules](std::int64_t) { rules.drop_empty = false; },
                "keep empty/whitespace-only lines");
  cmd->add_flag("--no-drop-control",
                [&rules](std::int64_t) { rules.drop_control = false; },
                "keep lines with control characters");
  cmd->add_flag("--no-collapse",
                [&rules](std::int64_t) { rules.collapse_whitespace = false; },
                "do not collapse whitespace runs");
  cmd->add_option("--max-tokens", rules.max_tokens, "drop lines longer than this (0 = off)")
      ->capture_default_str();
  cmd->add_option("--script", rules.script,
                  "drop lines mostly outside this script (ethiopic|latin)");
  cmd->add_option("--min-script-fraction", rules.min_script_fraction,
                  "fraction of word characters that must be in --script")
      ->capture_default_str();
}

int dispatch(int argc, char** argv) {
  CLI::App app{"back-translation data augmentation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "max worker threads for parallel stages (0 = auto)");
  bool no_manifest = false;
  app.add_flag("--no-manifest", no_manifest, "do not write .manifest.json files");
  // Global options apply before any subcommand work runs.
  app.immediate_callback();
  app.callback([&] { bt::set_max_threads(jobs); });

  // ---- clean ----
  auto* c_clean = app.add_subcommand("clean", "filter and normalize corpus lines");
  struct {
    std::string in, out, lang = "und", report;
    bt::corpus::CleanRules rules;
    ParallelIn pin;
    ParallelOut pout;
  } clean_args;
  c_clean->add_option("--in", clean_args.in, "monolingual input");
  c_clean->add_option("--out", clean_args.out, "monolingual output");
  c_clean->add_option("--lang", clean_args.lang, "language tag");
  c_clean->add_option("--report", clean_args.report, "write drop counts as JSON");
  clean_args.pin.add_flags(c_clean);
  clean_args.pout.add_flags(c_clean);
  add_clean_rule_flags(c_clean, clean_args.rules);
  c_clean->callback([&] {
    ManifestWriter mw("clean");
    mw.enabled = !no_manifest;
    bt::corpus::CleanStats st;
    if (!clean_args.in.empty()) {
      if (clean_args.out.empty()) throw bt::ConfigError("clean --in needs --out");
      const auto in = bt::corpus::load_corpus(clean_args.in, clean_args.lang, true);
      const auto out = bt::corpus::clean(in, clean_args.rules, &st);
      bt::corpus::save_corpus(out, clean_args.out);
      mw.input("corpus", clean_args.in, bt::corpus::checksum(in), in.sentences.size());
      mw.output("corpus", clean_args.out, bt::corpus::checksum(out), out.sentences.size());
    } else {
      const auto in = clean_args.pin.load(true);
      const auto out = bt::corpus::clean_parallel(in, clean_args.rules, &st);
      const auto first = clean_args.pout.save(out);
      mw.input("corpus", clean_args.pin.describe(), bt::corpus::checksum(in),
               in.pairs.size());
      mw.output("corpus", first, bt::corpus::checksum(out), out.pairs.size());
    }
    const json rep = {{"input", st.input},
                      {"kept", st.kept},
                      {"dropped_control", st.dropped_control},
                      {"dropped_empty", st.dropped_empty},
                      {"dropped_too_long", st.dropped_too_long},
                      {"dropped_script", st.dropped_script}};
    std::cerr << "clean: kept " << st.kept << "/" << st.input << '\n';
    if (!clean_args.report.empty()) {
      std::ofstream out(clean_args.report);
      out << rep.dump(2) << '\n';
    }
    mw.param("rules", json{{"max_tokens", clean_args.rules.max_tokens},
                           {"script", clean_args.rules.script}});
    mw.j["stats"] = rep;
    mw.write();
  });

  // ---- dedup ----
  auto* c_dedup = app.add_subcommand("dedup", "exact deduplication, first wins");
  struct {
    std::string in, out, lang = "und";
    ParallelIn pin;
    ParallelOut pout;
  } dedup_args;
  c_dedup->add_option("--in", dedup_args.in, "monolingual input");
  c_dedup->add_option("--out", dedup_args.out, "monolingual output");
  c_dedup->add_option("--lang", dedup_args.lang, "language tag");
  dedup_args.pin.add_flags(c_dedup);
  dedup_args.pout.add_flags(c_dedup);
  c_dedup->callback([&] {
    ManifestWriter mw("dedup");
    mw.enabled = !no_manifest;
    if (!dedup_args.in.empty()) {
      if (dedup_args.out.empty()) throw bt::ConfigError("dedup --in needs --out");
      const auto in = bt::corpus::load_corpus(dedup_args.in, dedup_args.lang, true);
      const auto out = bt::corpus::dedup(in);
      bt::corpus::save_corpus(out, dedup_args.out);
      std::cerr << "dedup: kept " << out.sentences.size() << "/" << in.sentences.size()
                << '\n';
      mw.input("corpus", dedup_args.in, bt::corpus::checksum(in), in.sentences.size());
      mw.output("corpus", dedup_args.out, bt::corpus::checksum(out), out.sentences.size());
    } else {
      const auto in = dedup_args.pin.load(true);
      const auto out = bt::corpus::dedup_parallel(in);
      const auto first = dedup_args.pout.save(out);
      std::cerr << "dedup: kept " << out.pairs.size() << "/" << in.pairs.size() << '\n';
      mw.input("corpus", dedup_args.pin.describe(), bt::corpus::checksum(in),
               in.pairs.size());
      mw.output("corpus", first, bt::corpus::checksum(out), out.pairs.size());
    }
    mw.write();
  });

  // ---- split ----
  auto* c_split = app.add_subcommand("split", "seeded train/dev/test split");
  struct {
    ParallelIn pin;
    std::string out_prefix;
    bool tsv_out = false;
    bt::corpus::SplitSpec spec;
  } split_args;
  split_args.pin.add_flags(c_split);
  c_split->add_option("--dev", split_args.spec.dev_n, "dev set size")->required();
  c_split->add_option("--test", split_args.spec.test_n, "test set size")->required();
  c_split->add_option("--seed", split_args.spec.seed, "shuffle seed")->required();
  c_split->add_option("--out-prefix", split_args.out_prefix, "output path prefix")
      ->required();
  c_split->add_flag("--tsv-out", split_args.tsv_out, "write TSV outputs");
  c_split->callback([&] {
    ManifestWriter mw("split");
    mw.enabled = !no_manifest;
    const auto in = split_args.pin.load();
    const auto r = bt::corpus::split(in, split_args.spec);
    mw.input("corpus", split_args.pin.describe(), bt::corpus::checksum(in),
             in.pairs.size());
    auto emit = [&](const char* name, const bt::corpus::ParallelCorpus& part) {
      std::string first;
      if (split_args.tsv_out) {
        first = split_args.out_prefix + "." + name + ".tsv";
        bt::corpus::save_parallel_tsv(part, first);
      } else {
        first = split_args.out_prefix + "." + name + ".src";
        bt::corpus::save_parallel(part, first,
                                  split_args.out_prefix + "." + name + ".tgt");
      }
      mw.output(name, first, bt::corpus::checksum(part), part.pairs.size());
    };
    emit("train", r.train);
    emit("dev", r.dev);
    emit("test", r.test);
    mw.param("seed", split_args.spec.seed);
    std::cerr << "split: train " << r.train.pairs.size() << ", dev " << r.dev.pairs.size()
              << ", test " << r.test.pairs.size() << '\n';
    mw.write();
  });

  // ---- tokenize ----
  auto* c_tok = app.add_subcommand("tokenize", "rule-based tokenization");
  struct {
    std::string in, out, lang = "und";
  } tok_args;
  c_tok->add_option("--in", tok_args.in)->required();
  c_tok->add_option("--out", tok_args.out)->required();
  c_tok->add_option("--lang", tok_args.lang);
  c_tok->callback([&] {
    ManifestWriter mw("tokenize");
    mw.enabled = !no_manifest;
    const auto in = bt::corpus::load_corpus(tok_args.in, tok_args.lang, true);
    const auto out = bt::textnorm::tokenize_corpus(in);
    bt::corpus::save_corpus(out, tok_args.out);
    mw.input("corpus", tok_args.in, bt::corpus::checksum(in), in.sentences.size());
    mw.output("corpus", tok_args.out, bt::corpus::checksum(out), out.sentences.size());
    mw.write();
  });

  // ---- normalize-geez ----
  auto* c_geez = app.add_subcommand("normalize-geez",
                                    "consonantal-skeleton normalization for Ge'ez text");
  struct {
    std::string in, out;
  } geez_args;
  c_geez->add_option("--in", geez_args.in)->required();
  c_geez->add_option("--out", geez_args.out)->required();
  c_geez->callback([&] {
    ManifestWriter mw("normalize-geez");
    mw.enabled = !no_manifest;
    const auto in = bt::corpus::load_corpus(geez_args.in, "und", true);
    bt::corpus::Corpus out;
    out.lang = in.lang;
    for (const auto& s : in.sentences)
      out.sentences.push_back(bt::textnorm::strip_vowel_marks(s));
    bt::corpus::save_corpus(out, geez_args.out);
    mw.input("corpus", geez_args.in, bt::corpus::checksum(in), in.sentences.size());
    mw.output("corpus", geez_args.out, bt::corpus::checksum(out), out.sentences.size());
    mw.write();
  });

  // ---- bpe-learn ----
  auto* c_blearn = app.add_subcommand("bpe-learn", "learn a BPE merge table");
  struct {
    std::vector<std::string> in;
    std::string out, eow = "</w>";
    std::size_t merges = 0;
  } blearn_args;
  c_blearn->add_option("--in", blearn_args.in, "tokenized input corpora (repeatable)")
      ->required();
  c_blearn->add_option("--merges", blearn_args.merges, "number of merge operations")
      ->required();
  c_blearn->add_option("--out", blearn_args.out, "model file")->required();
  c_blearn->add_option("--eow", blearn_args.eow, "end-of-word marker");
  c_blearn->callback([&] {
    bt::subword::Vocabulary vocab;
    for (const auto& path : blearn_args.in)
      bt::subword::add_to_vocab(vocab, bt::corpus::load_corpus(path, "und", true));
    const auto model = bt::subword::bpe_learn(vocab, blearn_args.merges, blearn_args.eow);
    bt::subword::save_model(model, blearn_args.out);
    std::cerr << "bpe-learn: " << model.merges.size() << " merges from "
              << vocab.entries.size() << " word types\n";
  });

  // ---- bpe-apply ----
  auto* c_bapply = app.add_subcommand("bpe-apply", "segment a tokenized corpus");
  struct {
    std::string model, in, out;
  } bapply_args;
  c_bapply->add_option("--model", bapply_args.model)->required();
  c_bapply->add_option("--in", bapply_args.in)->required();
  c_bapply->add_option("--out", bapply_args.out)->required();
  c_bapply->callback([&] {
    ManifestWriter mw("bpe-apply");
    mw.enabled = !no_manifest;
    const auto model = bt::subword::load_model(bapply_args.model);
    const auto in = bt::corpus::load_corpus(bapply_args.in, "und", true);
    const auto out = bt::subword::bpe_apply_corpus(model, in);
    bt::corpus::save_corpus(out, bapply_args.out);
    mw.input("corpus", bapply_args.in, bt::corpus::checksum(in), in.sentences.size());
    mw.param("model", bapply_args.model);
    mw.output("corpus", bapply_args.out, bt::corpus::checksum(out), out.sentences.size());
    mw.write();
  });

  // ---- bpe-decode ----
  auto* c_bdecode = app.add_subcommand("bpe-decode", "undo BPE segmentation");
  struct {
    std::string in, out, eow = "</w>";
  } bdecode_args;
  c_bdecode->add_option("--in", bdecode_args.in)->required();
  c_bdecode->add_option("--out", bdecode_args.out)->required();
  c_bdecode->add_option("--eow", bdecode_args.eow, "end-of-word marker");
  c_bdecode->callback([&] {
    const auto in = bt::corpus::load_corpus(bdecode_args.in, "und", true);
    const auto out = bt::subword::bpe_decode_corpus(in, bdecode_args.eow);
    bt::corpus::save_corpus(out, bdecode_args.out);
  });

  // ---- dict-induce ----
  auto* c_dict = app.add_subcommand("dict-induce",
                                    "edit-distance bilingual dictionary induction");
  struct {
    std::string tgt, rel, out;
    std::string tgt_lang = "tgt", rel_lang = "rel";
    bt::lexicon::InduceOptions opts;
  } dict_args;
  c_dict->add_option("--tgt", dict_args.tgt, "tokenized target-language corpus")->required();
  c_dict->add_option("--rel", dict_args.rel, "tokenized related-language corpus")
      ->required();
  c_dict->add_option("--out", dict_args.out, "dictionary TSV")->required();
  c_dict->add_option("--tgt-lang", dict_args.tgt_lang);
  c_dict->add_option("--rel-lang", dict_args.rel_lang);
  c_dict->add_option("--max-dist", dict_args.opts.max_dist)->capture_default_str();
  c_dict->add_option("--min-count", dict_args.opts.min_count)->capture_default_str();
  c_dict->callback([&] {
    const auto vt = bt::subword::build_vocab(
        bt::corpus::load_corpus(dict_args.tgt, dict_args.tgt_lang, true));
    const auto vr = bt::subword::build_vocab(
        bt::corpus::load_corpus(dict_args.rel, dict_args.rel_lang, true));
    const auto dict = bt::lexicon::induce_dictionary(vt, dict_args.tgt_lang, vr,
                                                     dict_args.rel_lang, dict_args.opts);
    bt::lexicon::save_dictionary(dict, dict_args.out);
    std::cerr << "dict-induce: " << dict.pairs.size() << " pairs\n";
  });

  // ---- align-emb ----
  auto* c_align = app.add_subcommand("align-emb",
                                     "orthogonal alignment of embedding tables");
  struct {
    std::string tgt_emb, rel_emb, dict, out;
  } align_args;
  c_align->add_option("--tgt-emb", align_args.tgt_emb)->required();
  c_align->add_option("--rel-emb", align_args.rel_emb)->required();
  c_align->add_option("--dict", align_args.dict)->required();
  c_align->add_option("--out", align_args.out, "map file")->required();
  c_align->callback([&] {
    const auto tgt = bt::embalign::load_embeddings(align_args.tgt_emb);
    const auto rel = bt::embalign::load_embeddings(align_args.rel_emb);
    const auto dict = bt::lexicon::load_dictionary(align_args.dict);
    bt::embalign::AlignStats st;
    const auto map = bt::embalign::procrustes_align(tgt, rel, dict, &st);
    bt::embalign::save_map(map, align_args.out);
    std::cerr << "align-emb: " << st.used_pairs << " pairs used, " << st.skipped_missing
              << " missing, " << st.skipped_duplicate << " duplicate\n";
  });

  // ---- nn-lookup ----
  auto* c_nn = app.add_subcommand("nn-lookup", "nearest neighbors under a map");
  struct {
    std::string map, tgt_emb, rel_emb, word;
    std::size_t k = 5;
  } nn_args;
  c_nn->add_option("--map", nn_args.map)->required();
  c_nn->add_option("--tgt-emb", nn_args.tgt_emb)->required();
  c_nn->add_option("--rel-emb", nn_args.rel_emb)->required();
  c_nn->add_option("--word", nn_args.word)->required();
  c_nn->add_option("-k,--top-k", nn_args.k);
  c_nn->callback([&] {
    const auto map = bt::embalign::load_map(nn_args.map);
    const auto tgt = bt::embalign::load_embeddings(nn_args.tgt_emb);
    const auto rel = bt::embalign::load_embeddings(nn_args.rel_emb);
    for (const auto& cand :
         bt::embalign::nn_translate(nn_args.word, map, tgt, rel, nn_args.k))
      std::printf("%s\t%.6f\n", cand.word.c_str(), cand.similarity);
  });

  // ---- backtranslate ----
  auto* c_bt = app.add_subcommand("backtranslate",
                                  "generate synthetic pairs from monolingual text");
  struct {
    std::string mono, mono_lang = "tgt", backend;
    std::string backend_src, backend_tgt;
    ParallelOut pout;
    std::string manifest;
    bool allow_mismatch = false, ratio_filter = false;
    std::size_t batch_size = 64;
    double timeout = 300.0;
  } bt_args;
  c_bt->add_option("--mono", bt_args.mono, "monolingual target-language file")->required();
  c_bt->add_option("--mono-lang", bt_args.mono_lang);
  c_bt->add_option("--backend", bt_args.backend,
                   "identity | dict:FILE:fwd|rev | cmd:... | http(s)://...")
      ->required();
  c_bt->add_option("--backend-src", bt_args.backend_src,
                   "language the backend consumes")->required();
  c_bt->add_option("--backend-tgt", bt_args.backend_tgt,
                   "language the backend produces")->required();
  bt_args.pout.add_flags(c_bt);
  c_bt->add_option("--manifest", bt_args.manifest, "manifest path override");
  c_bt->add_flag("--allow-lang-mismatch", bt_args.allow_mismatch);
  c_bt->add_flag("--length-ratio-filter", bt_args.ratio_filter);
  c_bt->add_option("--batch-size", bt_args.batch_size)->capture_default_str();
  c_bt->add_option("--timeout", bt_args.timeout, "per-batch backend timeout (s)")
      ->capture_default_str();
  c_bt->callback([&] {
    const auto mono = bt::corpus::load_corpus(bt_args.mono, bt_args.mono_lang);
    bt::translate::BackendOptions bo;
    bo.batch_size = bt_args.batch_size;
    bo.timeout_sec = bt_args.timeout;
    const auto backend = bt::translate::make_translator(bt_args.backend, bt_args.backend_src,
                                                        bt_args.backend_tgt, bo);
    bt::augment::BacktranslateOptions opts;
    opts.allow_lang_mismatch = bt_args.allow_mismatch;
    opts.length_ratio_filter = bt_args.ratio_filter;
    const auto res = bt::augment::backtranslate(mono, backend, opts);
    const auto first = bt_args.pout.save(res.synthetic);
    std::cerr << "backtranslate: " << res.synthetic.pairs.size() << " pairs, "
              << res.dropped() << " dropped\n";
    ManifestWriter mw("backtranslate");
    mw.enabled = !no_manifest;
    mw.input("mono", bt_args.mono, bt::corpus::checksum(mono), mono.sentences.size());
    mw.output("synthetic", first, bt::corpus::checksum(res.synthetic),
              res.synthetic.pairs.size());
    mw.param("backend", backend->id());
    mw.param("dropped", res.dropped());
    if (!bt_args.manifest.empty()) mw.path = bt_args.manifest;
    mw.write();
  });

  // ---- run-strategy ----
  auto* c_run = app.add_subcommand("run-strategy", "config-driven augmentation run");
  struct {
    std::string config;
    bool validate_only = false;
  } run_args;
  c_run->add_option("--config", run_args.config, "pipeline config JSON")->required();
  c_run->add_flag("--validate-only", run_args.validate_only,
                  "print the validated plan and exit");
  c_run->callback([&] {
    const auto cfg = bt::pipeline::PipelineConfig::load(run_args.config);
    const auto v = bt::pipeline::validate_config(cfg);
    if (!v.ok()) {
      for (const auto& e : v.errors) std::cerr << "error: " << e << '\n';
      throw bt::ConfigError(std::to_string(v.errors.size()) + " config error(s)");
    }
    if (run_args.validate_only) {
      for (const auto& st : v.plan.stages)
        std::cout << st.name << ": " << st.detail << '\n';
      return;
    }
    const auto outs = bt::pipeline::run(cfg);
    std::cerr << "run-strategy: wrote " << outs.mixed_src.string() << ", "
              << outs.mixed_tgt.string() << ", " << outs.manifest.string() << '\n';
  });

  // ---- mix ----
  auto* c_mix = app.add_subcommand("mix", "concatenate authentic and synthetic corpora");
  struct {
    ParallelIn auth, syn;
    ParallelOut pout;
    std::string src_lang = "src", tgt_lang = "tgt";
  } mix_args;
  mix_args.auth.add_flags(c_mix, "auth");
  mix_args.syn.add_flags(c_mix, "syn");
  mix_args.pout.add_flags(c_mix);
  c_mix->add_option("--src-lang", mix_args.src_lang);
  c_mix->add_option("--tgt-lang", mix_args.tgt_lang);
  c_mix->callback([&] {
    mix_args.auth.src_lang = mix_args.syn.src_lang = mix_args.src_lang;
    mix_args.auth.tgt_lang = mix_args.syn.tgt_lang = mix_args.tgt_lang;
    const auto a = mix_args.auth.load();
    const auto s = mix_args.syn.load();
    const auto out = bt::corpus::mix(a, s);
    const auto first = mix_args.pout.save(out);
    std::cerr << "mix: " << a.pairs.size() << " + " << s.pairs.size() << " = "
              << out.pairs.size() << " pairs\n";
    ManifestWriter mw("mix");
    mw.enabled = !no_manifest;
    mw.input("authentic", mix_args.auth.describe(), bt::corpus::checksum(a),
             a.pairs.size());
    mw.input("synthetic", mix_args.syn.describe(), bt::corpus::checksum(s),
             s.pairs.size());
    mw.output("mixed", first, bt::corpus::checksum(out), out.pairs.size());
    mw.write();
  });

  // ---- bleu ----
  auto* c_bleu = app.add_subcommand("bleu", "corpus-level BLEU");
  struct {
    std::string hyp, ref;
    bool as_json = false;
  } bleu_args;
  c_bleu->add_option("--hyp", bleu_args.hyp)->required();
  c_bleu->add_option("--ref", bleu_args.ref)->required();
  c_bleu->add_flag("--json", bleu_args.as_json);
  c_bleu->callback([&] {
    const auto hyp = bt::corpus::load_corpus(bleu_args.hyp, "hyp", true);
    const auto ref = bt::corpus::load_corpus(bleu_args.ref, "ref", true);
    const auto r = bt::eval::bleu(hyp, ref);
    if (bleu_args.as_json)
      std::cout << r.to_json().dump(2) << '\n';
    else
      std::cout << r.to_text();
  });

  // ---- phrase-report ----
  auto* c_phrase = app.add_subcommand("phrase-report",
                                      "most-frequently-correct n-gram table");
  struct {
    std::string hyp, ref;
    bt::eval::PhraseReportOptions opts;
    bool as_json = false;
  } phrase_args;
  c_phrase->add_option("--hyp", phrase_args.hyp)->required();
  c_phrase->add_option("--ref", phrase_args.ref)->required();
  c_phrase->add_option("--n-min", phrase_args.opts.n_min)->capture_default_str();
  c_phrase->add_option("--n-max", phrase_args.opts.n_max)->capture_default_str();
  c_phrase->add_option("--min-ref-count", phrase_args.opts.min_ref_count)
      ->capture_default_str();
  c_phrase->add_option("--top-k", phrase_args.opts.top_k)->capture_default_str();
  c_phrase->add_flag("--json", phrase_args.as_json);
  c_phrase->callback([&] {
    const auto hyp = bt::corpus::load_corpus(phrase_args.hyp, "hyp", true);
    const auto ref = bt::corpus::load_corpus(phrase_args.ref, "ref", true);
    const auto rows = bt::eval::phrase_accuracy_report(hyp, ref, phrase_args.opts);
    if (phrase_args.as_json) {
      json j = json::array();
      for (const auto& r : rows)
        j.push_back({{"ngram", r.ngram},
                     {"correct", r.correct},
                     {"ref_count", r.ref_count},
                     {"accuracy", r.accuracy}});
      std::cout << j.dump(2) << '\n';
    } else {
      std::printf("%-40s %10s %10s %10s\n", "ngram", "correct", "ref", "accuracy");
      for (const auto& r : rows)
        std::printf("%-40s %10llu %10llu %10.3f\n", r.ngram.c_str(),
                    static_cast<unsigned long long>(r.correct),
                    static_cast<unsigned long long>(r.ref_count), r.accuracy);
    }
  });

  // ---- compare ----
  auto* c_cmp = app.add_subcommand("compare", "side-by-side system comparison");
  struct {
    std::string hyp_a, hyp_b, ref;
    bool as_json = false;
  } cmp_args;
  c_cmp->add_option("--hyp-a", cmp_args.hyp_a)->required();
  c_cmp->add_option("--hyp-b", cmp_args.hyp_b)->required();
  c_cmp->add_option("--ref", cmp_args.ref)->required();
  c_cmp->add_flag("--json", cmp_args.as_json);
  c_cmp->callback([&] {
    const auto a = bt::corpus::load_corpus(cmp_args.hyp_a, "a", true);
    const auto b = bt::corpus::load_corpus(cmp_args.hyp_b, "b", true);
    const auto ref = bt::corpus::load_corpus(cmp_args.ref, "ref", true);
    const auto rows = bt::eval::compare_systems(a, b, ref);
    if (cmp_args.as_json) {
      json j = json::array();
      for (const auto& r : rows)
        j.push_back({{"hyp_a", r.hyp_a},
                     {"hyp_b", r.hyp_b},
                     {"ref", r.ref},
                     {"bleu_a", r.bleu_a},
                     {"bleu_b", r.bleu_b},
                     {"delta", r.delta}});
      std::cout << j.dump(2) << '\n';
    } else {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::printf("# %zu  delta %+0.2f (a %.2f, b %.2f)\n", i, r.delta, r.bleu_a,
                    r.bleu_b);
        std::printf("  a:   %s\n  b:   %s\n  ref: %s\n", r.hyp_a.c_str(), r.hyp_b.c_str(),
                    r.ref.c_str());
      }
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "btaug: " << e.what() << '\n';
    return bt::exit_code_for(e);
  }
}
