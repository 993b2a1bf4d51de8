#include "bt/pipeline.hpp"

#include <fstream>
#include <set>

#include "bt/augment.hpp"
#include "bt/corpus.hpp"
#include "bt/errors.hpp"
#include "bt/subword.hpp"
#include "bt/textnorm.hpp"
#include "bt/translate.hpp"

namespace bt::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  PipelineConfig cfg;
  try {
    in >> cfg.raw;
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  cfg.base_dir = fs::path(path).parent_path();
  if (cfg.base_dir.empty()) cfg.base_dir = ".";
  return cfg;
}

PipelineConfig PipelineConfig::from_json(json j, fs::path base_dir) {
  PipelineConfig cfg;
  cfg.raw = std::move(j);
  cfg.base_dir = std::move(base_dir);
  return cfg;
}

fs::path PipelineConfig::resolve(const std::string& p) const {
  fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

namespace {

const std::set<std::string> kTopLevelKeys = {
    "seed",    "corpora", "rel_lang",        "strategy", "backends",
    "preprocessing", "lexicon", "eval",      "backend_options", "output"};

struct Checker {
  const PipelineConfig& cfg;
  std::vector<std::string>& errors;

  void fail(const std::string& msg) { errors.push_back(msg); }

  const json* get(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  }

  std::string str_field(const json& j, const std::string& where, const std::string& key) {
    const json* v = get(j, key);
    if (!v || !v->is_string() || v->get<std::string>().empty()) {
      fail(where + "." + key + " must be a non-empty string");
      return {};
    }
    return v->get<std::string>();
  }

  void check_file(const std::string& where, const std::string& p) {
    if (p.empty()) return;
    if (!fs::exists(cfg.resolve(p))) fail(where + ": no such file: " + p);
  }

  bool uint_field(const json& j, const std::string& where, const std::string& key,
                  bool required, std::uint64_t* out = nullptr) {
    const json* v = get(j, key);
    if (!v) {
      if (required) fail(where + "." + key + " is required");
      return false;
    }
    const bool nonneg_int =
        v->is_number_unsigned() ||
        (v->is_number_integer() && v->get<std::int64_t>() >= 0);
    if (!nonneg_int) {
      fail(where + "." + key + " must be a non-negative integer");
      return false;
    }
    if (out) *out = v->get<std::uint64_t>();
    return true;
  }

  void check_backend_spec(const std::string& role, const std::string& spec) {
    if (spec == "identity") return;
    if (spec.rfind("dict:", 0) == 0) {
      const std::string rest = spec.substr(5);
      const std::size_t colon = rest.rfind(':');
      if (colon == std::string::npos ||
          (rest.substr(colon + 1) != "fwd" && rest.substr(colon + 1) != "rev")) {
        fail("backends." + role + ": dictionary spec must be dict:FILE:fwd or dict:FILE:rev");
        return;
      }
      check_file("backends." + role, rest.substr(0, colon));
      return;
    }
    if (spec.rfind("cmd:", 0) == 0 || spec.rfind("http://", 0) == 0 ||
        spec.rfind("https://", 0) == 0)
      return;
    fail("backends." + role + ": unrecognized backend spec '" + spec + "'");
  }
};

}  // namespace

Validation validate_config(const PipelineConfig& cfg) {
  Validation v;
  Checker ck{cfg, v.errors};
  const json& j = cfg.raw;

  if (!j.is_object()) {
    ck.fail("config root must be a JSON object");
    return v;
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!kTopLevelKeys.count(key)) ck.fail("unknown config section '" + key + "'");
  }

  ck.uint_field(j, "config", "seed", /*required=*/true);

  std::string mono_lang, src_lang, tgt_lang;
  const json* corpora = ck.get(j, "corpora");
  if (!corpora || !corpora->is_object()) {
    ck.fail("corpora section is required");
  } else {
    const json* mono = ck.get(*corpora, "mono_tgt");
    if (!mono || !mono->is_object()) {
      ck.fail("corpora.mono_tgt is required");
    } else {
      ck.check_file("corpora.mono_tgt.path", ck.str_field(*mono, "corpora.mono_tgt", "path"));
      mono_lang = ck.str_field(*mono, "corpora.mono_tgt", "lang");
    }
    const json* auth = ck.get(*corpora, "authentic");
    if (!auth || !auth->is_object()) {
      ck.fail("corpora.authentic is required");
    } else {
      ck.check_file("corpora.authentic.src", ck.str_field(*auth, "corpora.authentic", "src"));
      ck.check_file("corpora.authentic.tgt", ck.str_field(*auth, "corpora.authentic", "tgt"));
      src_lang = ck.str_field(*auth, "corpora.authentic", "src_lang");
      tgt_lang = ck.str_field(*auth, "corpora.authentic", "tgt_lang");
    }
    if (!mono_lang.empty() && !tgt_lang.empty() && mono_lang != tgt_lang)
      ck.fail("corpora.mono_tgt.lang must match corpora.authentic.tgt_lang");
  }

  std::string strategy;
  const json* strat = ck.get(j, "strategy");
  if (!strat || !strat->is_string()) {
    ck.fail("strategy is required (direct, indirect, pivot_sup or pivot_unsup)");
  } else {
    strategy = strat->get<std::string>();
    try {
      augment::kind_from_name(strategy);
    } catch (const ConfigError& e) {
      ck.fail(e.what());
      strategy.clear();
    }
  }

  const bool needs_rel = strategy == "indirect" || strategy == "pivot_sup" ||
                         strategy == "pivot_unsup";
  if (needs_rel) {
    const json* rel = ck.get(j, "rel_lang");
    if (!rel || !rel->is_string() || rel->get<std::string>().empty())
      ck.fail("rel_lang is required for strategy " + strategy);
  }

  const json* backends = ck.get(j, "backends");
  auto need_backend = [&](const std::string& role) {
    if (!backends || !backends->is_object() || !backends->contains(role)) {
      ck.fail("strategy " + strategy + " needs backends." + role);
      return;
    }
    const json& spec = (*backends)[role];
    if (!spec.is_string()) {
      ck.fail("backends." + role + " must be a spec string");
      return;
    }
    ck.check_backend_spec(role, spec.get<std::string>());
  };
  if (strategy == "direct") need_backend("tgt_to_src");
  if (strategy == "indirect") need_backend("rel_to_src");
  if (strategy == "pivot_sup" || strategy == "pivot_unsup") {
    need_backend("tgt_to_rel");
    need_backend("rel_to_src");
  }

  std::uint64_t bpe_merges = 0;
  if (const json* pre = ck.get(j, "preprocessing")) {
    if (!pre->is_object()) {
      ck.fail("preprocessing must be an object");
    } else {
      for (const char* flag : {"clean", "dedup", "tokenize"}) {
        const json* f = ck.get(*pre, flag);
        if (f && !f->is_boolean()) ck.fail(std::string("preprocessing.") + flag + " must be a boolean");
      }
      ck.uint_field(*pre, "preprocessing", "bpe_merges", false, &bpe_merges);
      if (const json* rules = ck.get(*pre, "clean_rules"); rules && !rules->is_object())
        ck.fail("preprocessing.clean_rules must be an object");
    }
  }
  if (const json* lex = ck.get(j, "lexicon")) {
    if (!lex->is_object()) {
      ck.fail("lexicon must be an object");
    } else {
      ck.uint_field(*lex, "lexicon", "max_dist", false);
      ck.uint_field(*lex, "lexicon", "min_count", false);
    }
  }
  if (const json* ev = ck.get(j, "eval")) {
    if (!ev->is_object()) {
      ck.fail("eval must be an object");
    } else {
      std::uint64_t n_min = 1, n_max = 4;
      ck.uint_field(*ev, "eval", "n_min", false, &n_min);
      ck.uint_field(*ev, "eval", "n_max", false, &n_max);
      if (n_min == 0 || n_min > n_max) ck.fail("eval needs 1 <= n_min <= n_max");
      ck.uint_field(*ev, "eval", "min_ref_count", false);
      ck.uint_field(*ev, "eval", "top_k", false);
    }
  }
  if (const json* bo = ck.get(j, "backend_options")) {
    if (!bo->is_object()) {
      ck.fail("backend_options must be an object");
    } else {
      std::uint64_t bs = 64;
      if (ck.uint_field(*bo, "backend_options", "batch_size", false, &bs) && bs == 0)
        ck.fail("backend_options.batch_size must be >= 1");
      if (const json* t = ck.get(*bo, "timeout_sec");
          t && (!t->is_number() || t->get<double>() <= 0))
        ck.fail("backend_options.timeout_sec must be a positive number");
    }
  }

  const json* output = ck.get(j, "output");
  if (!output || !output->is_object() || !output->contains("dir") ||
      !(*output)["dir"].is_string() || (*output)["dir"].get<std::string>().empty())
    ck.fail("output.dir is required");

  if (v.ok()) {
    const json& corp = j["corpora"];
    v.plan.stages.push_back(
        {"load", "mono_tgt=" + corp["mono_tgt"]["path"].get<std::string>() +
                     " authentic=" + corp["authentic"]["src"].get<std::string>() + "," +
                     corp["authentic"]["tgt"].get<std::string>()});
    std::string pre = "none";
    if (j.contains("preprocessing")) {
      pre.clear();
      const json& p = j["preprocessing"];
      if (p.value("clean", false)) pre += "clean ";
      if (p.value("dedup", false)) pre += "dedup ";
      if (p.value("tokenize", false)) pre += "tokenize ";
      if (pre.empty()) pre = "none";
    }
    v.plan.stages.push_back({"preprocess", pre});
    std::string roles;
    for (const auto& [role, spec] : j["backends"].items())
      roles += role + "=" + spec.get<std::string>() + " ";
    v.plan.stages.push_back({"backends", roles});
    v.plan.stages.push_back({"backtranslate", "strategy=" + strategy});
    v.plan.stages.push_back({"mix", "authentic first, no provenance markers"});
    if (bpe_merges > 0)
      v.plan.stages.push_back({"bpe", "joint model, " + std::to_string(bpe_merges) + " merges"});
    v.plan.stages.push_back({"write", (*output)["dir"].get<std::string>()});
  }
  return v;
}

namespace {

corpus::CleanRules rules_from(const json& pre) {
  corpus::CleanRules rules;
  if (!pre.contains("clean_rules")) return rules;
  const json& r = pre["clean_rules"];
  rules.drop_control = r.value("drop_control", rules.drop_control);
  rules.collapse_whitespace = r.value("collapse_whitespace", rules.collapse_whitespace);
  rules.drop_empty = r.value("drop_empty", rules.drop_empty);
  rules.max_tokens = r.value("max_tokens", rules.max_tokens);
  rules.script = r.value("script", rules.script);
  rules.min_script_fraction = r.value("min_script_fraction", rules.min_script_fraction);
  return rules;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) s.push_back(digits[(v >> shift) & 0xF]);
  return s;
}

}  // namespace

RunOutputs run(const PipelineConfig& cfg) {
  const Validation v = validate_config(cfg);
  if (!v.ok()) {
    std::string msg = "invalid config:";
    for (const auto& e : v.errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  const json& j = cfg.raw;
  const json& corp = j["corpora"];

  corpus::Corpus mono =
      corpus::load_corpus(cfg.resolve(corp["mono_tgt"]["path"].get<std::string>()).string(),
                          corp["mono_tgt"]["lang"].get<std::string>(),
                          /*keep_empty=*/true);
  corpus::ParallelCorpus authentic = corpus::load_parallel(
      cfg.resolve(corp["authentic"]["src"].get<std::string>()).string(),
      cfg.resolve(corp["authentic"]["tgt"].get<std::string>()).string(),
      corp["authentic"]["src_lang"].get<std::string>(),
      corp["authentic"]["tgt_lang"].get<std::string>(), /*keep_empty=*/true);

  json pre_stats = json::object();
  if (j.contains("preprocessing")) {
    const json& pre = j["preprocessing"];
    if (pre.value("clean", false)) {
      const corpus::CleanRules rules = rules_from(pre);
      corpus::CleanStats ms, as;
      mono = corpus::clean(mono, rules, &ms);
      authentic = corpus::clean_parallel(authentic, rules, &as);
      pre_stats["clean"] = {{"mono_kept", ms.kept},
                           {"mono_dropped", ms.input - ms.kept},
                           {"authentic_kept", as.kept},
                           {"authentic_dropped", as.input - as.kept}};
    }
    if (pre.value("dedup", false)) {
      mono = corpus::dedup(mono);
      authentic = corpus::dedup_parallel(authentic);
      pre_stats["dedup"] = {{"mono_kept", mono.sentences.size()},
                           {"authentic_kept", authentic.pairs.size()}};
    }
    if (pre.value("tokenize", false)) {
      mono = textnorm::tokenize_corpus(mono);
      corpus::Corpus src{authentic.src_lang, {}}, tgt{authentic.tgt_lang, {}};
      for (auto& pr : authentic.pairs) {
        src.sentences.push_back(std::move(pr.src));
        tgt.sentences.push_back(std::move(pr.tgt));
      }
      src = textnorm::tokenize_corpus(src);
      tgt = textnorm::tokenize_corpus(tgt);
      for (std::size_t i = 0; i < authentic.pairs.size(); ++i) {
        authentic.pairs[i].src = std::move(src.sentences[i]);
        authentic.pairs[i].tgt = std::move(tgt.sentences[i]);
      }
      pre_stats["tokenize"] = true;
    }
  }

  translate::BackendOptions bo;
  if (j.contains("backend_options")) {
    bo.batch_size = j["backend_options"].value("batch_size", bo.batch_size);
    bo.timeout_sec = j["backend_options"].value("timeout_sec", bo.timeout_sec);
  }

  const std::string tgt_lang = authentic.tgt_lang;
  const std::string src_lang = authentic.src_lang;
  const std::string rel_lang = j.value("rel_lang", std::string{});
  const json& backends = j["backends"];
  auto backend = [&](const char* role, const std::string& from,
                     const std::string& to) -> translate::TranslatorPtr {
    if (!backends.contains(role)) return nullptr;
    std::string spec = backends[role].get<std::string>();
    if (spec.rfind("dict:", 0) == 0) {
      // Resolve the dictionary path relative to the config file.
      const std::size_t colon = spec.rfind(':');
      spec = "dict:" + cfg.resolve(spec.substr(5, colon - 5)).string() + spec.substr(colon);
    }
    return translate::make_translator(spec, from, to, bo);
  };

  augment::BtStrategy strat;
  strat.kind = augment::kind_from_name(j["strategy"].get<std::string>());
  strat.tgt_to_src = backend("tgt_to_src", tgt_lang, src_lang);
  strat.rel_to_src = backend("rel_to_src", rel_lang, src_lang);
  strat.tgt_to_rel = backend("tgt_to_rel", tgt_lang, rel_lang);

  augment::RunResult result =
      augment::run_strategy(strat, mono, authentic, j["seed"].get<std::uint64_t>());

  const fs::path out_dir = cfg.resolve(j["output"]["dir"].get<std::string>());
  fs::create_directories(out_dir);

  RunOutputs outs;
  outs.mixed_src = out_dir / ("mixed." + src_lang);
  outs.mixed_tgt = out_dir / ("mixed." + tgt_lang);
  outs.manifest = out_dir / "manifest.json";
  corpus::save_parallel(result.mixed, outs.mixed_src.string(), outs.mixed_tgt.string());

  json manifest;
  manifest["augment"] = result.manifest.to_json();
  manifest["pipeline"]["preprocessing"] = pre_stats;
  manifest["pipeline"]["outputs"] = {
      {"mixed_src", outs.mixed_src.string()},
      {"mixed_tgt", outs.mixed_tgt.string()},
      {"mixed_checksum", hex64(corpus::checksum(result.mixed))}};
  manifest["pipeline"]["config"] = cfg.raw;

  std::uint64_t bpe_merges = 0;
  if (j.contains("preprocessing"))
    bpe_merges = j["preprocessing"].value("bpe_merges", std::uint64_t{0});
  if (bpe_merges > 0) {
    corpus::Corpus joint{"", {}};
    for (const auto& pr : result.mixed.pairs) {
      joint.sentences.push_back(pr.src);
      joint.sentences.push_back(pr.tgt);
    }
    const subword::Vocabulary vocab = subword::build_vocab(joint);
    const subword::BpeModel model = subword::bpe_learn(vocab, bpe_merges);
    outs.bpe_model = out_dir / "bpe.model";
    subword::save_model(model, outs.bpe_model.string());

    corpus::Corpus src{src_lang, {}}, tgt{tgt_lang, {}};
    for (const auto& pr : result.mixed.pairs) {
      src.sentences.push_back(pr.src);
      tgt.sentences.push_back(pr.tgt);
    }
    outs.bpe_src = out_dir / ("mixed.bpe." + src_lang);
    outs.bpe_tgt = out_dir / ("mixed.bpe." + tgt_lang);
    corpus::save_corpus(subword::bpe_apply_corpus(model, src), outs.bpe_src.string());
    corpus::save_corpus(subword::bpe_apply_corpus(model, tgt), outs.bpe_tgt.string());
    manifest["pipeline"]["outputs"]["bpe_model"] = outs.bpe_model.string();
  }

  std::ofstream mf(outs.manifest);
  if (!mf) throw IoError("cannot write " + outs.manifest.string());
  mf << manifest.dump(2) << '\n';
  return outs;
}

}  // namespace bt::pipeline
